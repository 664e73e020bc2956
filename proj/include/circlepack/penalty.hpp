#pragma once

#include <span>
#include <vector>

#include "circlepack/model.hpp"

namespace packing {

// Overlap depth between two circles; 0 when they are disjoint or tangent.
double pair_depth(Vec2 ci, double ri, Vec2 cj, double rj);

// Depth by which a circle sticks out of the container; 0 when inside.
double boundary_depth(Vec2 ci, double ri, double R);

// Per-circle neighbor lists, each ascending. Symmetric, no self entries.
// Circle j is a neighbor of i when dist < max((r_i+r_j)/2, r_max/4) + r_i + r_j,
// which strictly dominates the overlap condition, so every overlapping pair is
// always listed.
struct AdjacencySet {
    std::vector<std::vector<int>> neighbors;
    bool operator==(const AdjacencySet&) const = default;
};

// radii ascending; xy is the flat (x_1, y_1, ..., x_n, y_n) layout
AdjacencySet build_adjacency(std::span<const double> radii, std::span<const double> xy);

// Sum of squared depths over listed pairs (each counted once, ascending (i,j)
// order) plus all boundary terms. Equals energy_full bit for bit when the
// adjacency set is freshly built, because the extra pairs contribute exact 0.
double energy(std::span<const double> radii, std::span<const double> xy, double R,
              const AdjacencySet& gamma);

// Accumulates into grad (size 2n, zeroed here). Pairs at distance exactly 0
// and boundary terms for a center exactly at the origin contribute nothing.
void energy_gradient(std::span<const double> radii, std::span<const double> xy, double R,
                     const AdjacencySet& gamma, std::span<double> grad);

// O(n^2) reference sum over all pairs, same (i,j) order.
double energy_full(std::span<const double> radii, std::span<const double> xy, double R);

std::vector<double> flatten(const Configuration& config);
Configuration unflatten(std::span<const double> xy, double R);

// Energy under a freshly built adjacency set.
double energy_fresh(const Instance& instance, const Configuration& config);

bool is_feasible(const Instance& instance, const Configuration& config,
                 double eps1 = SolverParams{}.eps1);

}  // namespace packing
