#include "circlepack/graphhash.hpp"

#include <cmath>
#include <stdexcept>

#include "circlepack/penalty.hpp"

namespace packing {

std::vector<int> radius_ranking(std::span<const double> radii_ascending) {
    std::vector<int> ranks(radii_ascending.size());
    int rank = 1;
    for (size_t i = 0; i < radii_ascending.size(); ++i) {
        if (i > 0) {
            const double a = radii_ascending[i - 1], b = radii_ascending[i];
            if (b - a > 1e-12 * std::max(std::abs(a), std::abs(b))) ++rank;
        }
        ranks[i] = rank;
    }
    return ranks;
}

LayoutGraph layout_to_graph(const Instance& instance, const Configuration& config,
                            double eps3) {
    const int n = instance.n();
    if (static_cast<int>(config.centers.size()) != n)
        throw std::invalid_argument("layout_to_graph: center count does not match instance");

    LayoutGraph graph;
    graph.n = n;
    graph.labels = radius_ranking(instance.radii);
    graph.labels.push_back(-1);

    const double R = config.container_radius;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (pair_depth(config.centers[i], instance.radii[i], config.centers[j],
                           instance.radii[j]) > eps3)
                graph.edges.emplace_back(i, j);
        }
        if (boundary_depth(config.centers[i], instance.radii[i], R) > eps3)
            graph.edges.emplace_back(i, n);
    }
    return graph;
}

std::vector<int> rattlers(const LayoutGraph& graph) {
    std::vector<int> degree(graph.n, 0);
    for (const auto& [i, j] : graph.edges) {
        if (i < graph.n) ++degree[i];
        if (j < graph.n) ++degree[j];
    }
    std::vector<int> out;
    for (int i = 0; i < graph.n; ++i)
        if (degree[i] == 0) out.push_back(i);
    return out;
}

uint32_t graph_hash(const LayoutGraph& graph, const HashParams& params) {
    // moduli are < 2^30, so residue products fit a u64 with room to spare
    const uint64_t M = params.mod;
    std::vector<uint64_t> pw_p(graph.n + 2), pw_q(graph.n + 2);
    pw_p[0] = pw_q[0] = 1 % M;
    for (int e = 1; e <= graph.n + 1; ++e) {
        pw_p[e] = pw_p[e - 1] * (params.p % M) % M;
        pw_q[e] = pw_q[e - 1] * (params.q % M) % M;
    }
    uint64_t h = 0;
    for (const auto& [i, j] : graph.edges) h = (h + pw_p[i + 1] * pw_q[j + 1]) % M;
    return static_cast<uint32_t>(h);
}

HashPair hash_pair(const LayoutGraph& graph, const SolverParams& params) {
    return {graph_hash(graph, params.hash1), graph_hash(graph, params.hash2)};
}

}  // namespace packing
