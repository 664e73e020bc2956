#pragma once

#include <optional>
#include <span>
#include <vector>

#include "circlepack/model.hpp"
#include "circlepack/optimizer.hpp"

namespace packing {

struct VacancyCircle {
    Vec2 center;
    double radius = 0.0;
};

struct VoronoiVertex {
    Vec2 pos;
    std::vector<int> sites;  // defining sites, ascending; >= 3 entries
};

// Finite piece of a bisector; unbounded pieces arrive pre-clipped.
struct VoronoiEdge {
    int site_a = 0;
    int site_b = 0;
    Vec2 p0;
    Vec2 p1;
};

struct VoronoiDiagram {
    std::vector<VoronoiVertex> vertices;
    std::vector<VoronoiEdge> edges;
};

// Voronoi diagram of the sites, rays clipped at the circle of clip_radius
// about the origin. Direct construction: a circumcenter with no strictly
// closer site is a vertex; bisector pieces that pass the nearest-two test are
// edges. Sizes here are small, so O(n^3) beats a sweepline on robustness.
VoronoiDiagram build_voronoi(std::span<const Vec2> sites, double clip_radius);

// Vertices inside the container plus every edge crossing of the container
// boundary, deduplicated within 1e-9. A single site gets a ring of eight
// fallback seeds at radius (R + smallest_radius) / 2.
std::vector<Vec2> seed_points(std::span<const Vec2> centers, double R,
                              double smallest_radius, const VoronoiDiagram& diagram);

// Penalized vacancy objective over u = (x_u, y_u, r_u):
//   sum_{i in gamma_u} d_ui^2 + d_u0^2 - rho * r_u
// with |r_u| inside the depth terms, so the radius may pass through zero.
double vacancy_energy(std::span<const double> radii, std::span<const Vec2> centers,
                      double R, const double u[3], double rho,
                      std::span<const int> gamma_u);
void vacancy_gradient(std::span<const double> radii, std::span<const Vec2> centers,
                      double R, const double u[3], double rho,
                      std::span<const int> gamma_u, double grad[3]);

// Largest circle fitting at a seed, found by two penalty stages (rho = 0.5,
// then 0.1). Empty when the optimizer leaves the disk of radius 2R or no
// usable clearance remains. The reported radius is the exact clearance at the
// final center, so the result never overlaps anything.
std::optional<VacancyCircle> detect_vacancy(std::span<const double> radii,
                                            std::span<const Vec2> centers, double R,
                                            Vec2 seed, const LbfgsConfig& lbfgs);

// All vacancies from all seeds; results with centers within 1e-6 are merged
// (larger radius kept), sorted by radius descending, ties by center.
std::vector<VacancyCircle> detect_all(const Instance& instance, const Configuration& config,
                                      double R, const LbfgsConfig& lbfgs);

}  // namespace packing
