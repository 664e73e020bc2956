#include "circlepack/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace packing {

double pair_depth(Vec2 ci, double ri, Vec2 cj, double rj) {
    return std::max(0.0, ri + rj - dist(ci, cj));
}

double boundary_depth(Vec2 ci, double ri, double R) {
    return std::max(0.0, norm(ci) + ri - R);
}

AdjacencySet build_adjacency(std::span<const double> radii, std::span<const double> xy) {
    const int n = static_cast<int>(radii.size());
    AdjacencySet gamma;
    gamma.neighbors.assign(n, {});
    if (n == 0) return gamma;
    const double quarter_max = radii[n - 1] / 4.0;
    for (int i = 0; i < n; ++i) {
        const double xi = xy[2 * i], yi = xy[2 * i + 1];
        for (int j = i + 1; j < n; ++j) {
            const double dx = xy[2 * j] - xi, dy = xy[2 * j + 1] - yi;
            const double d = std::sqrt(dx * dx + dy * dy);
            const double sum = radii[i] + radii[j];
            if (d < std::max(0.5 * sum, quarter_max) + sum) {
                gamma.neighbors[i].push_back(j);
                gamma.neighbors[j].push_back(i);
            }
        }
    }
    return gamma;
}

double energy(std::span<const double> radii, std::span<const double> xy, double R,
              const AdjacencySet& gamma) {
    const int n = static_cast<int>(radii.size());
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = xy[2 * i], yi = xy[2 * i + 1];
        for (int j : gamma.neighbors[i]) {
            if (j <= i) continue;  // each pair once, ascending order
            const double dx = xy[2 * j] - xi, dy = xy[2 * j + 1] - yi;
            const double d =
                std::max(0.0, radii[i] + radii[j] - std::sqrt(dx * dx + dy * dy));
            e += d * d;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double c = std::sqrt(xy[2 * i] * xy[2 * i] + xy[2 * i + 1] * xy[2 * i + 1]);
        const double d = std::max(0.0, c + radii[i] - R);
        e += d * d;
    }
    return e;
}

void energy_gradient(std::span<const double> radii, std::span<const double> xy, double R,
                     const AdjacencySet& gamma, std::span<double> grad) {
    const int n = static_cast<int>(radii.size());
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double xi = xy[2 * i], yi = xy[2 * i + 1];
        for (int j : gamma.neighbors[i]) {
            if (j <= i) continue;
            const double dx = xi - xy[2 * j], dy = yi - xy[2 * j + 1];
            const double len = std::sqrt(dx * dx + dy * dy);
            if (len == 0.0) continue;  // coincident centers: no defined direction
            const double d = radii[i] + radii[j] - len;
            if (d <= 0.0) continue;
            const double s = 2.0 * d / len;
            grad[2 * i] -= s * dx;
            grad[2 * i + 1] -= s * dy;
            grad[2 * j] += s * dx;
            grad[2 * j + 1] += s * dy;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double xi = xy[2 * i], yi = xy[2 * i + 1];
        const double c = std::sqrt(xi * xi + yi * yi);
        if (c == 0.0) continue;  // no radial direction at the origin
        const double d = c + radii[i] - R;
        if (d <= 0.0) continue;
        const double s = 2.0 * d / c;
        grad[2 * i] += s * xi;
        grad[2 * i + 1] += s * yi;
    }
}

double energy_full(std::span<const double> radii, std::span<const double> xy, double R) {
    const int n = static_cast<int>(radii.size());
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = xy[2 * i], yi = xy[2 * i + 1];
        for (int j = i + 1; j < n; ++j) {
            const double dx = xy[2 * j] - xi, dy = xy[2 * j + 1] - yi;
            const double d =
                std::max(0.0, radii[i] + radii[j] - std::sqrt(dx * dx + dy * dy));
            e += d * d;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double c = std::sqrt(xy[2 * i] * xy[2 * i] + xy[2 * i + 1] * xy[2 * i + 1]);
        const double d = std::max(0.0, c + radii[i] - R);
        e += d * d;
    }
    return e;
}

std::vector<double> flatten(const Configuration& config) {
    std::vector<double> xy(2 * config.centers.size());
    for (size_t i = 0; i < config.centers.size(); ++i) {
        xy[2 * i] = config.centers[i].x;
        xy[2 * i + 1] = config.centers[i].y;
    }
    return xy;
}

Configuration unflatten(std::span<const double> xy, double R) {
    Configuration config;
    config.container_radius = R;
    config.centers.resize(xy.size() / 2);
    for (size_t i = 0; i < config.centers.size(); ++i)
        config.centers[i] = {xy[2 * i], xy[2 * i + 1]};
    return config;
}

double energy_fresh(const Instance& instance, const Configuration& config) {
    const std::vector<double> xy = flatten(config);
    const AdjacencySet gamma = build_adjacency(instance.radii, xy);
    return energy(instance.radii, xy, config.container_radius, gamma);
}

bool is_feasible(const Instance& instance, const Configuration& config, double eps1) {
    return energy_fresh(instance, config) <= eps1;
}

}  // namespace packing
