#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <vector>

#include "circlepack/graphhash.hpp"
#include "circlepack/optimizer.hpp"
#include "circlepack/vacancy.hpp"

namespace packing {

// Wall-clock budget, or a deterministic cap on charged layout optimizations
// when iteration_cap > 0. Checked between coarse steps, never inside a single
// local optimization.
struct Budget {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double time_limit_seconds = std::numeric_limits<double>::infinity();
    uint64_t iteration_cap = 0;
    uint64_t iterations = 0;
    bool target_reached = false;

    double elapsed_seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
    void charge() { ++iterations; }
    bool exhausted() const {
        if (target_reached) return true;
        if (iteration_cap > 0) return iterations >= iteration_cap;
        return elapsed_seconds() >= time_limit_seconds;
    }
};

struct SearchStats {
    uint64_t layout_optimizations = 0;
    uint64_t shs_calls = 0;
    uint64_t shs_core_calls = 0;
    uint64_t i_shs_calls = 0;
};

struct SearchContext {
    const Instance& instance;
    const SolverParams& params;
    LbfgsConfig lbfgs;
    Budget* budget = nullptr;
    SearchStats* stats = nullptr;
    // instrumentation: every hash pair admitted to the core search queue
    std::vector<HashPair>* admitted_log = nullptr;
};

SearchContext make_context(const Instance& instance, const SolverParams& params);

// Pairs of circles whose radius ranks differ by exactly 1 (0-based indices,
// lexicographic). Pairs where both circles are rattlers are dropped.
struct SwapList {
    std::vector<std::pair<int, int>> pairs;
};

SwapList build_swap_list(const Instance& instance, const std::vector<bool>& is_rattler);

// A locally optimized layout together with its converged energy.
struct LocalMinimum {
    Configuration config;
    double energy = 0.0;
};

// Local optimization of the penalty energy at fixed R, charged to the budget.
LocalMinimum optimize_layout(SearchContext& ctx, const Configuration& start, double R);

// Exchange the centers of circles i and j, then re-optimize.
LocalMinimum swap_neighbor(SearchContext& ctx, const Configuration& config, double R,
                           int i, int j);

// Move circle i to the vacancy center, then re-optimize.
LocalMinimum insert_neighbor(SearchContext& ctx, const Configuration& config, double R,
                             int i, Vec2 vacancy_center);

struct InsertOp {
    int circle = 0;   // index of a small circle
    int vacancy = 0;  // index into the detected vacancy list
};

// Small circles are the first ceil(n/3) by radius; vacancies considered are
// the largest ceil(n/3). Rattler circles are excluded.
std::vector<InsertOp> build_insert_ops(const Instance& instance, size_t vacancy_count,
                                       const std::vector<bool>& is_rattler);

// Best-first search over swap moves with hash deduplication. Explores only
// layouts whose hash pair is not yet in the table; stops after n consecutive
// non-improving selections, on an overlap-free incumbent, or when the queue
// drains. A start already in the table returns unchanged.
LocalMinimum shs_core(SearchContext& ctx, const LocalMinimum& start, double R,
                      ExploredSet& table);

// Greedy swap descent, then greedy insert descent, then the deduplicated core
// search; any improvement returns control to the greedy swap phase. The
// greedy phases never touch the table.
LocalMinimum shs(SearchContext& ctx, const LocalMinimum& start, double R,
                 ExploredSet& table);

std::vector<bool> rattler_mask(const Instance& instance, const Configuration& config,
                               double R, double eps3);

}  // namespace packing
