#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circlepack/geometry.hpp"
#include "circlepack/rng.hpp"

namespace packing {

// A packing instance: place all circles, radii r_1 <= ... <= r_n, inside one
// circular container of minimal radius.
struct Instance {
    std::string name;
    std::vector<double> radii;  // ascending, all positive

    int n() const { return static_cast<int>(radii.size()); }
    double max_radius() const { return radii.back(); }
    // No container smaller than sqrt(sum r_i^2) can hold the circles.
    double area_lower_bound() const;
};

enum class RadiusFamily { linear, inv_sqrt, sqrt, inv_two_thirds, inv_fifth };

std::optional<RadiusFamily> parse_family(const std::string& name);
std::string family_name(RadiusFamily family);

Instance generate_instance(RadiusFamily family, int n);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format: first significant line is n, then one radius per line.
// Lines whose first non-blank character is '#' are comments.
Instance read_instance(const std::string& path);
void write_instance(const Instance& instance, const std::string& path);

// Centers plus the radius of the container they live in.
struct Configuration {
    std::vector<Vec2> centers;
    double container_radius = 0.0;
};

struct FeasibilityReport {
    double max_pair_depth = 0.0;
    double max_boundary_depth = 0.0;
    double energy = 0.0;  // full pairwise sum of squared depths
    bool feasible = false;
};

struct HashParams {
    uint64_t p = 0;
    uint64_t q = 0;
    uint64_t mod = 0;
};

struct SolverParams {
    double eps0 = 1e-10;  // gradient norm stop for local optimization
    double eps1 = 1e-25;  // energy at or below this counts as overlap free
    double eps3 = 1e-8;   // depth threshold for contact graph edges
    HashParams hash1{17, 193, 998244353};
    HashParams hash2{97, 257, 1004535809};
    int maxiter = 200;      // unimproved-iteration limit of the restart search
    double rho0 = 0.9;      // density behind the initial container estimate
    double alpha0 = 1e-2;   // initial container shrink ratio
    double alpha_min = 1e-4;
    double beta = 0.2;      // shrink ratio decay per restart round
    bool enable_shs_core = true;
};

double estimate_initial_radius(const Instance& instance, double density);

// Centers drawn uniformly from the disk of radius R. Draw order is fixed:
// one (area, angle) pair per circle, in index order.
Configuration random_layout(const Instance& instance, double R, Rng& rng);

// Exact O(n^2) feasibility check; never uses the adjacency shortcut.
// With tol set, feasible means both max depths are <= tol; without it,
// feasible means energy <= eps1.
FeasibilityReport verify_solution(const Instance& instance, const Configuration& config,
                                  std::optional<double> tol = {},
                                  double eps1 = SolverParams{}.eps1);

std::string render_svg(const Instance& instance, const Configuration& config);

// Solution file: "n R" then one "i r_i x_i y_i" line per circle,
// reals at 15 significant digits.
struct Solution {
    std::vector<double> radii;
    Configuration config;
};

void write_solution(const Instance& instance, const Configuration& config,
                    const std::string& path);
Solution read_solution(const std::string& path);

}  // namespace packing
