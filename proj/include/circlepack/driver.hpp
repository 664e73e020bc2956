#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "circlepack/search.hpp"

namespace packing {

// One timestamped incumbent update within a run.
struct ImprovementEvent {
    double t_seconds = 0.0;
    double radius = 0.0;
};

struct RunCounters {
    uint64_t i_shs_calls = 0;
    uint64_t shs_calls = 0;
    uint64_t layout_optimizations = 0;
};

struct RunResult {
    double best_radius = 0.0;
    Configuration best_configuration;
    double elapsed_seconds = 0.0;
    uint64_t seed = 0;
    RunCounters counters;
    // incumbent radii in adoption order, strictly decreasing
    std::vector<ImprovementEvent> events;
    // the reported best came from the round-capped inflation path
    bool used_fallback = false;
    // set when target_radius was given and reached
    std::optional<double> target_hit_seconds;
};

struct SolveOptions {
    double time_limit_seconds = std::numeric_limits<double>::infinity();
    // > 0 replaces the wall clock with a deterministic cap on charged layout
    // optimizations, making runs bit reproducible
    uint64_t iteration_budget = 0;
    uint64_t seed = 1;
    // optional early stop once the incumbent radius is at or below this
    std::optional<double> target_radius;
    std::vector<HashPair>* admitted_log = nullptr;
};

// Relocates m ~ U{1..ceil(n/6)} distinct circles uniformly inside the
// container disk; every other center stays put.
Configuration perturb(const Instance& instance, const Configuration& config, Rng& rng);

struct IShsResult {
    bool feasible = false;
    Configuration best;  // meaningful only when feasible
};

// One restart round: builds its own feasible solution near r0, then alternates
// SHS improvement and relocation perturbation at a shrunken radius until
// params.maxiter consecutive rounds fail to improve the compact energy.
// on_feasible fires for the initial feasible solution and for every radius
// improvement; the bool marks results produced by the inflation fallback.
IShsResult i_shs(SearchContext& ctx, double r0, double alpha, ExploredSet& table, Rng& rng,
                 const std::function<void(const Configuration&, bool)>& on_feasible = {});

// Full run: density-estimated start, shrink-until-stuck, then restarts with a
// decaying shrink ratio. Always returns a feasible configuration.
RunResult solve(const Instance& instance, const SolverParams& params,
                const SolveOptions& options);

// Empirical run-time distribution: fraction of runs succeeding by time t,
// right continuous and non-decreasing.
struct RtdCurve {
    std::vector<double> times;  // ascending
    int total_runs = 0;

    double value(double t) const;
};

RtdCurve rtd(std::vector<double> success_times, int total_runs);

// Improvement logs, one row per event; a file may interleave many runs.
struct RunLogRow {
    int run_id = 0;
    uint64_t seed = 0;
    double t_seconds = 0.0;
    double radius = 0.0;
};

void write_run_log_csv(const std::vector<RunLogRow>& rows, const std::string& path);
std::vector<RunLogRow> read_run_log_csv(const std::string& path);

// First time each run reached a radius <= target; runs that never did are
// absent. Feeds rtd().
std::vector<double> success_times_from_log(const std::vector<RunLogRow>& rows,
                                           double target);

}  // namespace packing
