#include "circlepack/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace packing {

BenchReport bench_run(const std::vector<Instance>& instances, const BenchOptions& options) {
    if (options.runs < 1) throw std::invalid_argument("bench: runs must be at least 1");
    if (instances.empty()) return {};
    const int total = static_cast<int>(instances.size()) * options.runs;

    struct Task {
        BenchRow row;
        std::vector<ImprovementEvent> events;
    };
    std::vector<Task> tasks(total);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= total) return;
            const int inst_idx = k / options.runs;
            const int run = k % options.runs;
            const Instance& inst = instances[inst_idx];

            SolverParams params;
            params.enable_shs_core = options.enable_shs_core;
            SolveOptions sopt;
            sopt.time_limit_seconds = options.time_limit_seconds;
            sopt.seed = static_cast<uint64_t>(inst_idx) * 1000003u +
                        static_cast<uint64_t>(run) + 1u;
            RunResult res = solve(inst, params, sopt);

            Task& t = tasks[k];
            t.row.instance = inst.name;
            t.row.seed = res.seed;
            t.row.r_best = res.best_radius;
            t.row.feasible = verify_solution(inst, res.best_configuration, 1e-9).feasible;
            t.row.elapsed_seconds = res.elapsed_seconds;
            t.row.time_to_final = res.events.empty() ? 0.0 : res.events.back().t_seconds;
            t.events = std::move(res.events);
        }
    };

    const int nthreads = std::max(1, std::min(options.threads, total));
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    BenchReport report;
    report.rows.reserve(total);
    for (int k = 0; k < total; ++k) {
        report.rows.push_back(std::move(tasks[k].row));
        for (const ImprovementEvent& ev : tasks[k].events)
            report.log.push_back({k, report.rows.back().seed, ev.t_seconds, ev.radius});
    }
    report.summaries = summarize_bench(report.rows);
    return report;
}

std::vector<BenchSummary> summarize_bench(const std::vector<BenchRow>& rows) {
    std::vector<BenchSummary> out;
    std::vector<std::vector<const BenchRow*>> groups;
    for (const BenchRow& row : rows) {
        size_t g = 0;
        while (g < out.size() && out[g].instance != row.instance) ++g;
        if (g == out.size()) {
            out.emplace_back();
            out.back().instance = row.instance;
            groups.emplace_back();
        }
        groups[g].push_back(&row);
    }
    for (size_t g = 0; g < out.size(); ++g) {
        BenchSummary& s = out[g];
        s.runs = static_cast<int>(groups[g].size());
        s.best = groups[g].front()->r_best;
        s.worst = s.best;
        double radius_sum = 0.0;
        double time_sum = 0.0;
        for (const BenchRow* row : groups[g]) {
            s.best = std::min(s.best, row->r_best);
            s.worst = std::max(s.worst, row->r_best);
            radius_sum += row->r_best;
            time_sum += row->time_to_final;
        }
        s.avg = radius_sum / s.runs;
        s.mean_time_to_final = time_sum / s.runs;
        int hits = 0;
        for (const BenchRow* row : groups[g])
            if (std::abs(row->r_best - s.best) <= 1e-6) ++hits;
        s.success_rate = static_cast<double>(hits) / s.runs;
    }
    return out;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "instance,seed,r_best,feasible,elapsed_seconds,time_to_final\n";
    char buf[224];
    for (const BenchRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%s,%llu,%.17g,%d,%.17g,%.17g\n",
                      row.instance.c_str(), static_cast<unsigned long long>(row.seed),
                      row.r_best, row.feasible ? 1 : 0, row.elapsed_seconds,
                      row.time_to_final);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<BenchRow> read_bench_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<BenchRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            const size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 6)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 6 fields");
        BenchRow row;
        try {
            row.instance = fields[0];
            row.seed = std::stoull(fields[1]);
            row.r_best = std::stod(fields[2]);
            row.feasible = std::stoi(fields[3]) != 0;
            row.elapsed_seconds = std::stod(fields[4]);
            row.time_to_final = std::stod(fields[5]);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad bench row");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace packing
