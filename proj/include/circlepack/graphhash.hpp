#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "circlepack/model.hpp"

namespace packing {

// Dense 1-based ranks over ascending radii; radii equal within relative
// tolerance 1e-12 share a rank.
std::vector<int> radius_ranking(std::span<const double> radii_ascending);

// Contact graph of a layout. Vertices 0..n-1 are circles, vertex n is the
// container. An edge means overlap depth > eps3.
struct LayoutGraph {
    int n = 0;
    std::vector<int> labels;                  // size n+1; rank per circle, -1 for container
    std::vector<std::pair<int, int>> edges;   // (i, j), i < j <= n, lexicographic
};

LayoutGraph layout_to_graph(const Instance& instance, const Configuration& config,
                            double eps3 = SolverParams{}.eps3);

// Circles with no incident edge.
std::vector<int> rattlers(const LayoutGraph& graph);

// sum over edges of p^(i+1) * q^(j+1) mod M, exponents 1-based with the
// container as vertex n+1.
uint32_t graph_hash(const LayoutGraph& graph, const HashParams& params);

struct HashPair {
    uint32_t h1 = 0;
    uint32_t h2 = 0;
    auto operator<=>(const HashPair&) const = default;
};

HashPair hash_pair(const LayoutGraph& graph, const SolverParams& params);

class ExploredSet {
public:
    // true when the pair was new (and is now recorded)
    bool check_and_insert(HashPair pair) { return set_.insert(pair).second; }
    bool contains(HashPair pair) const { return set_.count(pair) > 0; }
    size_t size() const { return set_.size(); }

private:
    std::set<HashPair> set_;
};

}  // namespace packing
