#include "circlepack/search.hpp"

#include <algorithm>
#include <cmath>

namespace packing {

SearchContext make_context(const Instance& instance, const SolverParams& params) {
    SearchContext ctx{instance, params, LbfgsConfig{}};
    ctx.lbfgs.grad_tol = params.eps0;
    return ctx;
}

SwapList build_swap_list(const Instance& instance, const std::vector<bool>& is_rattler) {
    const int n = instance.n();
    const std::vector<int> ranks = radius_ranking(instance.radii);
    SwapList list;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(ranks[i] - ranks[j]) != 1) continue;
            if (is_rattler[i] && is_rattler[j]) continue;  // nothing would change
            list.pairs.emplace_back(i, j);
        }
    }
    return list;
}

std::vector<bool> rattler_mask(const Instance& instance, const Configuration& config,
                               double R, double eps3) {
    Configuration at_r = config;
    at_r.container_radius = R;
    const LayoutGraph graph = layout_to_graph(instance, at_r, eps3);
    std::vector<bool> mask(instance.n(), false);
    for (int i : rattlers(graph)) mask[i] = true;
    return mask;
}

LocalMinimum optimize_layout(SearchContext& ctx, const Configuration& start, double R) {
    if (ctx.budget) ctx.budget->charge();
    if (ctx.stats) ++ctx.stats->layout_optimizations;
    PenaltyObjective obj(ctx.instance, R);
    const LayoutResult res = layout_optimize(obj, flatten(start), ctx.lbfgs);
    LocalMinimum lm;
    lm.config = unflatten(res.x, R);
    lm.energy = energy_fresh(ctx.instance, lm.config);
    return lm;
}

LocalMinimum swap_neighbor(SearchContext& ctx, const Configuration& config, double R,
                           int i, int j) {
    Configuration moved = config;
    std::swap(moved.centers[i], moved.centers[j]);
    return optimize_layout(ctx, moved, R);
}

LocalMinimum insert_neighbor(SearchContext& ctx, const Configuration& config, double R,
                             int i, Vec2 vacancy_center) {
    Configuration moved = config;
    moved.centers[i] = vacancy_center;
    return optimize_layout(ctx, moved, R);
}

std::vector<InsertOp> build_insert_ops(const Instance& instance, size_t vacancy_count,
                                       const std::vector<bool>& is_rattler) {
    const int n = instance.n();
    const int small_count = (n + 2) / 3;  // ceil(n/3)
    const int vac_count = static_cast<int>(
        std::min(vacancy_count, static_cast<size_t>(small_count)));
    std::vector<InsertOp> ops;
    for (int i = 0; i < small_count; ++i) {
        if (is_rattler[i]) continue;
        for (int j = 0; j < vac_count; ++j) ops.push_back({i, j});
    }
    return ops;
}

namespace {

bool out_of_budget(const SearchContext& ctx) {
    return ctx.budget != nullptr && ctx.budget->exhausted();
}

HashPair config_hash(const SearchContext& ctx, const Configuration& config, double R) {
    Configuration at_r = config;
    at_r.container_radius = R;
    return hash_pair(layout_to_graph(ctx.instance, at_r, ctx.params.eps3), ctx.params);
}

}  // namespace

LocalMinimum shs_core(SearchContext& ctx, const LocalMinimum& start, double R,
                      ExploredSet& table) {
    if (ctx.stats) ++ctx.stats->shs_core_calls;
    const int n = ctx.instance.n();

    const HashPair start_pair = config_hash(ctx, start.config, R);
    if (!table.check_and_insert(start_pair)) return start;
    if (ctx.admitted_log) ctx.admitted_log->push_back(start_pair);

    struct Entry {
        LocalMinimum lm;
        uint64_t seq;
    };
    std::vector<Entry> queue;
    uint64_t next_seq = 0;
    queue.push_back({start, next_seq++});

    LocalMinimum best = start;
    int unimproved = 0;

    while (unimproved < n && !queue.empty()) {
        if (out_of_budget(ctx)) break;

        size_t pick = 0;
        for (size_t k = 1; k < queue.size(); ++k) {
            if (queue[k].lm.energy < queue[pick].lm.energy ||
                (queue[k].lm.energy == queue[pick].lm.energy &&
                 queue[k].seq < queue[pick].seq))
                pick = k;
        }
        const LocalMinimum current = std::move(queue[pick].lm);
        queue.erase(queue.begin() + static_cast<long>(pick));

        if (current.energy < best.energy) {
            best = current;
            unimproved = 0;
        } else {
            ++unimproved;
        }
        if (best.energy <= ctx.params.eps1) break;

        const std::vector<bool> mask =
            rattler_mask(ctx.instance, current.config, R, ctx.params.eps3);
        const SwapList list = build_swap_list(ctx.instance, mask);
        for (const auto& [i, j] : list.pairs) {
            if (out_of_budget(ctx)) break;
            LocalMinimum neighbor = swap_neighbor(ctx, current.config, R, i, j);
            const HashPair pair = config_hash(ctx, neighbor.config, R);
            if (!table.check_and_insert(pair)) continue;
            if (ctx.admitted_log) ctx.admitted_log->push_back(pair);
            queue.push_back({std::move(neighbor), next_seq++});
        }
    }
    return best;
}

LocalMinimum shs(SearchContext& ctx, const LocalMinimum& start, double R,
                 ExploredSet& table) {
    if (ctx.stats) ++ctx.stats->shs_calls;
    LocalMinimum best = start;

    while (best.energy > ctx.params.eps1 && !out_of_budget(ctx)) {
        // greedy swap descent
        {
            const std::vector<bool> mask =
                rattler_mask(ctx.instance, best.config, R, ctx.params.eps3);
            const SwapList list = build_swap_list(ctx.instance, mask);
            LocalMinimum phase_best;
            bool have = false;
            for (const auto& [i, j] : list.pairs) {
                if (out_of_budget(ctx)) break;
                LocalMinimum neighbor = swap_neighbor(ctx, best.config, R, i, j);
                if (!have || neighbor.energy < phase_best.energy) {
                    phase_best = std::move(neighbor);
                    have = true;
                }
            }
            if (have && phase_best.energy < best.energy) {
                best = std::move(phase_best);
                continue;
            }
        }

        // greedy insert descent
        {
            const std::vector<VacancyCircle> vacancies =
                detect_all(ctx.instance, best.config, R, ctx.lbfgs);
            const std::vector<bool> mask =
                rattler_mask(ctx.instance, best.config, R, ctx.params.eps3);
            const std::vector<InsertOp> ops =
                build_insert_ops(ctx.instance, vacancies.size(), mask);
            LocalMinimum phase_best;
            bool have = false;
            for (const InsertOp& op : ops) {
                if (out_of_budget(ctx)) break;
                LocalMinimum neighbor = insert_neighbor(ctx, best.config, R, op.circle,
                                                        vacancies[op.vacancy].center);
                if (!have || neighbor.energy < phase_best.energy) {
                    phase_best = std::move(neighbor);
                    have = true;
                }
            }
            if (have && phase_best.energy < best.energy) {
                best = std::move(phase_best);
                continue;
            }
        }

        if (ctx.params.enable_shs_core) {
            LocalMinimum core = shs_core(ctx, best, R, table);
            if (core.energy < best.energy) {
                best = std::move(core);
                continue;
            }
        }
        break;
    }
    return best;
}

}  // namespace packing
