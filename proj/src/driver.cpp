#include "circlepack/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace packing {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Tangent row along the x axis, centered. Never overlaps and never fails, so
// it backstops the (practically unreachable) case where every optimized start
// degenerates.
Configuration lined_up_layout(const Instance& instance) {
    const auto& r = instance.radii;
    const int n = instance.n();
    Configuration config;
    config.centers.resize(n);
    double x = r[0];
    config.centers[0] = {x, 0.0};
    for (int i = 1; i < n; ++i) {
        x += (r[i - 1] + r[i]) * (1.0 + 1e-9);
        config.centers[i] = {x, 0.0};
    }
    const double half = (x + r[n - 1]) / 2.0;
    double radius = 0.0;
    for (int i = 0; i < n; ++i) {
        config.centers[i].x -= half;
        radius = std::max(radius, std::abs(config.centers[i].x) + r[i]);
    }
    config.container_radius = radius;
    return config;
}

// Single owner of the incumbent. Adopts only strict radius improvements that
// re-verify overlap free against a fresh adjacency set.
struct GlobalBest {
    const Instance* instance = nullptr;
    const SolverParams* params = nullptr;
    Budget* budget = nullptr;
    RunResult* result = nullptr;
    std::optional<double> target;
    bool has = false;

    bool offer(const Configuration& config, bool from_fallback) {
        if (has && config.container_radius >= result->best_radius) return false;
        if (energy_fresh(*instance, config) > params->eps1) return false;
        has = true;
        result->best_radius = config.container_radius;
        result->best_configuration = config;
        result->used_fallback = from_fallback;
        result->events.push_back({budget->elapsed_seconds(), config.container_radius});
        if (target && config.container_radius <= *target) {
            if (!result->target_hit_seconds)
                result->target_hit_seconds = budget->elapsed_seconds();
            budget->target_reached = true;
        }
        return true;
    }
};

}  // namespace

Configuration perturb(const Instance& instance, const Configuration& config, Rng& rng) {
    const int n = instance.n();
    const int strength_max = (n + 5) / 6;  // ceil(n/6)
    const int m = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(strength_max)));
    Configuration out = config;
    const double R = config.container_radius;
    for (int idx : rng.sample_distinct(m, n)) {
        const double rad = R * std::sqrt(rng.uniform01());
        const double ang = 2.0 * kPi * rng.uniform01();
        out.centers[idx] = {rad * std::cos(ang), rad * std::sin(ang)};
    }
    return out;
}

IShsResult i_shs(SearchContext& ctx, double r0, double alpha, ExploredSet& table, Rng& rng,
                 const std::function<void(const Configuration&, bool)>& on_feasible) {
    if (ctx.stats) ++ctx.stats->i_shs_calls;
    const Instance& inst = ctx.instance;
    const SolverParams& params = ctx.params;
    Budget* budget = ctx.budget;

    IShsResult out;
    auto adopt = [&](const Configuration& config, bool fallback) {
        out.feasible = true;
        out.best = config;
        if (on_feasible) on_feasible(config, fallback);
    };

    Configuration start = random_layout(inst, r0, rng);
    LocalMinimum lm = optimize_layout(ctx, start, r0);
    const ContainerResult init = container_optimize(inst, lm.config, r0, params, ctx.lbfgs);
    if (!is_feasible(inst, init.config, params.eps1)) return out;
    adopt(init.config, init.fallback);
    if (budget && budget->exhausted()) return out;

    double rp = (1.0 - alpha) * std::min(r0, out.best.container_radius);
    LocalMinimum compact = optimize_layout(ctx, lm.config, rp);
    LocalMinimum best_compact = compact;

    int unimproved = 0;
    while (unimproved < params.maxiter) {
        if (budget && budget->exhausted()) break;
        compact = shs(ctx, compact, rp, table);
        if (compact.energy < best_compact.energy) {
            unimproved = 0;
            best_compact = compact;
            const ContainerResult t =
                container_optimize(inst, compact.config, rp, params, ctx.lbfgs);
            if (is_feasible(inst, t.config, params.eps1) &&
                t.config.container_radius < out.best.container_radius) {
                adopt(t.config, t.fallback);
                rp = (1.0 - alpha) * std::min(r0, out.best.container_radius);
                compact = optimize_layout(ctx, compact.config, rp);
                best_compact = compact;
            }
        } else {
            ++unimproved;
        }
        if (budget && budget->exhausted()) break;
        const Configuration offspring = perturb(inst, best_compact.config, rng);
        compact = optimize_layout(ctx, offspring, rp);
    }
    return out;
}

RunResult solve(const Instance& instance, const SolverParams& params,
                const SolveOptions& options) {
    RunResult result;
    result.seed = options.seed;

    Budget budget;
    budget.time_limit_seconds = options.time_limit_seconds;
    budget.iteration_cap = options.iteration_budget;

    SearchStats stats;
    SearchContext ctx = make_context(instance, params);
    ctx.budget = &budget;
    ctx.stats = &stats;
    ctx.admitted_log = options.admitted_log;

    Rng rng(options.seed);
    ExploredSet table;
    GlobalBest best{&instance, &params, &budget, &result, options.target_radius};

    // Rapid first pass at a density-estimated radius; runs to completion
    // regardless of budget so a feasible incumbent always exists.
    {
        const double r_init = estimate_initial_radius(instance, params.rho0);
        const Configuration start = random_layout(instance, r_init, rng);
        LocalMinimum lm = optimize_layout(ctx, start, r_init);
        lm = shs(ctx, lm, r_init, table);
        const ContainerResult cr =
            container_optimize(instance, lm.config, r_init, params, ctx.lbfgs);
        best.offer(cr.config, cr.fallback);
        if (!best.has) best.offer(lined_up_layout(instance), true);
    }

    // Shrink the incumbent radius until a round fails to improve it.
    while (!budget.exhausted()) {
        const double r = (1.0 - params.alpha0) * result.best_radius;
        const Configuration start = random_layout(instance, r, rng);
        LocalMinimum lm = optimize_layout(ctx, start, r);
        lm = shs(ctx, lm, r, table);
        const ContainerResult cr =
            container_optimize(instance, lm.config, r, params, ctx.lbfgs);
        if (!best.offer(cr.config, cr.fallback)) break;
    }

    // Restarts around the incumbent with a decaying shrink ratio.
    double alpha = params.alpha0;
    while (!budget.exhausted()) {
        i_shs(ctx, result.best_radius, alpha, table, rng,
              [&](const Configuration& config, bool fallback) {
                  best.offer(config, fallback);
              });
        alpha = std::max(params.alpha_min, alpha * params.beta);
    }

    result.elapsed_seconds = budget.elapsed_seconds();
    result.counters.i_shs_calls = stats.i_shs_calls;
    result.counters.shs_calls = stats.shs_calls;
    result.counters.layout_optimizations = stats.layout_optimizations;
    return result;
}

double RtdCurve::value(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return static_cast<double>(it - times.begin()) / static_cast<double>(total_runs);
}

RtdCurve rtd(std::vector<double> success_times, int total_runs) {
    if (total_runs < 1) throw std::invalid_argument("rtd: total runs must be at least 1");
    if (success_times.size() > static_cast<size_t>(total_runs))
        throw std::invalid_argument("rtd: more successes than runs");
    std::sort(success_times.begin(), success_times.end());
    return RtdCurve{std::move(success_times), total_runs};
}

void write_run_log_csv(const std::vector<RunLogRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "run_id,seed,t_seconds,radius\n";
    char buf[160];
    for (const RunLogRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%d,%llu,%.17g,%.17g\n", row.run_id,
                      static_cast<unsigned long long>(row.seed), row.t_seconds, row.radius);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RunLogRow> read_run_log_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<RunLogRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;  // header
        RunLogRow row;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        unsigned long long seed = 0;
        if (!(fields >> row.run_id >> seed >> row.t_seconds >> row.radius))
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad log row");
        row.seed = seed;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> success_times_from_log(const std::vector<RunLogRow>& rows,
                                           double target) {
    std::map<int, double> first_hit;
    for (const RunLogRow& row : rows) {
        if (row.radius > target) continue;
        auto [it, fresh] = first_hit.try_emplace(row.run_id, row.t_seconds);
        if (!fresh && row.t_seconds < it->second) it->second = row.t_seconds;
    }
    std::vector<double> times;
    times.reserve(first_hit.size());
    for (const auto& [run, t] : first_hit) times.push_back(t);
    return times;
}

}  // namespace packing
