#pragma once

#include <string>
#include <vector>

#include "circlepack/driver.hpp"

namespace packing {

struct BenchRow {
    std::string instance;
    uint64_t seed = 0;
    double r_best = 0.0;
    bool feasible = false;
    double elapsed_seconds = 0.0;
    double time_to_final = 0.0;  // timestamp of the last improvement
};

struct BenchSummary {
    std::string instance;
    int runs = 0;
    double best = 0.0;
    double avg = 0.0;
    double worst = 0.0;
    double success_rate = 0.0;  // fraction matching best within 1e-6
    double mean_time_to_final = 0.0;
};

struct BenchOptions {
    int runs = 1;
    double time_limit_seconds = 60.0;
    int threads = 1;
    bool enable_shs_core = true;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // instance major, run minor
    std::vector<BenchSummary> summaries;
    std::vector<RunLogRow> log;  // improvement events of every run
};

// runs solves per (instance, run) pair on a pool of options.threads workers;
// each solve is single threaded and seeded by its pair, so results do not
// depend on the thread count.
BenchReport bench_run(const std::vector<Instance>& instances, const BenchOptions& options);

// Recomputes summaries from rows alone; on rows read back from the CSV this
// reproduces bench_run's summaries exactly.
std::vector<BenchSummary> summarize_bench(const std::vector<BenchRow>& rows);

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);
std::vector<BenchRow> read_bench_csv(const std::string& path);

}  // namespace packing
