#include <algorithm>
#include <cmath>
#include <vector>

#include "circlepack/optimizer.hpp"
#include "circlepack/rng.hpp"
#include "doctest.h"

using namespace packing;

namespace {

struct Quadratic final : AamObjective {
    std::vector<double> target;

    explicit Quadratic(std::vector<double> t) : target(std::move(t)) {}

    double value_and_gradient(std::span<const double> x,
                              std::span<double> grad) const override {
        double v = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - target[i];
            grad[i] = 2.0 * d;
            v += d * d;
        }
        return v;
    }
    bool refresh_adjacency(std::span<const double>) override { return false; }
};

}  // namespace

TEST_CASE("lbfgs minimizes a quadratic") {
    Quadratic f({3.0, -1.0, 0.5, 2.0, -4.0, 0.0, 1.25, -0.75});
    const LayoutResult res = layout_optimize(f, std::vector<double>(8, 0.0), LbfgsConfig{});
    REQUIRE(res.converged);
    CHECK(res.iterations <= 16);
    for (size_t i = 0; i < f.target.size(); ++i)
        CHECK(std::abs(res.x[i] - f.target[i]) < 1e-8);
}

TEST_CASE("adjacency maintenance steps") {
    const std::vector<double> radii{1.0, 1.0};
    const std::vector<double> close{0.0, 0.0, 2.5, 0.0};
    const std::vector<double> far{0.0, 0.0, 50.0, 0.0};

    AamState state;
    state.cnt = 0;
    state.len = 4;
    state.gamma = build_adjacency(radii, close);

    // below the deferral length: count only
    AamState s1 = aam_step(state, radii, close);
    CHECK(s1.cnt == 1);
    CHECK(s1.len == 4);
    CHECK(s1.gamma == state.gamma);

    // rebuild due, set unchanged: deferral doubles
    state.cnt = 3;
    AamState s2 = aam_step(state, radii, close);
    CHECK(s2.cnt == 0);
    CHECK(s2.len == 8);
    CHECK(s2.gamma == state.gamma);

    // rebuild due, set changed: adopt and reset
    AamState s3 = aam_step(state, radii, far);
    CHECK(s3.cnt == 0);
    CHECK(s3.len == 1);
    CHECK(s3.gamma == build_adjacency(radii, far));
}

TEST_CASE("already optimal input returns unchanged") {
    Instance two{"two", {1.0, 1.0}};
    PenaltyObjective obj(two, 10.0);
    const std::vector<double> x0{-2.0, 0.0, 2.0, 0.0};
    const LayoutResult res = layout_optimize(obj, x0, LbfgsConfig{});
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    CHECK(res.x == x0);
    CHECK(res.value == 0.0);
}

TEST_CASE("overlapping pair separates to exact zero energy") {
    Instance two{"two", {1.0, 1.0}};
    PenaltyObjective obj(two, 3.0);
    LbfgsConfig cfg;
    const LayoutResult res = layout_optimize(obj, {-0.1, 0.0, 0.1, 0.0}, cfg);
    REQUIRE(res.converged);
    Configuration config = unflatten(res.x, 3.0);
    CHECK(energy_fresh(two, config) == 0.0);
}

TEST_CASE("layout optimization is deterministic") {
    const Instance inst{"five", {1.0, 2.0, 3.0, 4.0, 5.0}};
    Rng rng(99);
    const Configuration start = random_layout(inst, 8.5, rng);
    LayoutResult a, b;
    {
        PenaltyObjective obj(inst, 8.5);
        a = layout_optimize(obj, flatten(start), LbfgsConfig{});
    }
    {
        PenaltyObjective obj(inst, 8.5);
        b = layout_optimize(obj, flatten(start), LbfgsConfig{});
    }
    CHECK(a.x == b.x);  // bitwise
    CHECK(a.value == b.value);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("augmented objective values") {
    Instance one{"one", {1.0}};
    const std::vector<double> z{0.0, 0.0, 2.0};
    const AdjacencySet gamma = build_adjacency(one.radii, std::span(z).first(2));
    CHECK(augmented_energy(one, z, 1e-3, gamma) == 4e-3);

    std::vector<double> grad(3);
    augmented_gradient(one, z, 1e-3, gamma, grad);
    CHECK(grad[0] == 0.0);
    CHECK(grad[1] == 0.0);
    CHECK(grad[2] == 2.0 * 1e-3 * 2.0);  // no boundary overlap: d/dR = 2 rho R
}

TEST_CASE("augmented gradient matches central differences") {
    Rng rng(4242);
    for (int t = 0; t < 100; ++t) {
        const int n = 3 + static_cast<int>(rng.below(6));
        std::vector<double> radii(n);
        for (double& r : radii) r = rng.uniform(0.4, 1.4);
        std::sort(radii.begin(), radii.end());
        Instance inst{"rand", radii};

        double area = 0.0;
        for (double r : radii) area += r * r;
        const double R = std::sqrt(area) * rng.uniform(0.8, 1.1);
        std::vector<double> z(2 * n + 1);
        for (int i = 0; i < n; ++i) {
            const double rad = R * std::sqrt(rng.uniform01());
            const double ang = 2.0 * 3.14159265358979323846 * rng.uniform01();
            z[2 * i] = rad * std::cos(ang);
            z[2 * i + 1] = rad * std::sin(ang);
        }
        z[2 * n] = R;
        const double rho = 1e-3;
        const AdjacencySet gamma =
            build_adjacency(radii, std::span(z).first(2 * static_cast<size_t>(n)));

        std::vector<double> grad(2 * n + 1);
        augmented_gradient(inst, z, rho, gamma, grad);

        const double h = 1e-7;
        double err2 = 0.0, norm2 = 0.0;
        for (size_t k = 0; k < z.size(); ++k) {
            const double saved = z[k];
            z[k] = saved + h;
            const double up = augmented_energy(inst, z, rho, gamma);
            z[k] = saved - h;
            const double down = augmented_energy(inst, z, rho, gamma);
            z[k] = saved;
            const double fd = (up - down) / (2.0 * h);
            err2 += (grad[k] - fd) * (grad[k] - fd);
            norm2 += grad[k] * grad[k];
        }
        CHECK(std::sqrt(err2) / std::max(1.0, std::sqrt(norm2)) < 1e-5);
    }
}

TEST_CASE("container optimization reaches tight feasible radii") {
    SolverParams params;
    LbfgsConfig lbfgs;
    lbfgs.grad_tol = params.eps0;

    Instance one{"one", {1.0}};
    Configuration start1{{{0.3, 0.0}}, 2.0};
    const ContainerResult r1 = container_optimize(one, start1, 2.0, params, lbfgs);
    CHECK_FALSE(r1.fallback);
    CHECK(energy_fresh(one, r1.config) <= params.eps1);
    CHECK(r1.config.container_radius >= 1.0);
    CHECK(r1.config.container_radius <= 1.0 + 1e-4);

    Instance two{"two", {1.0, 1.0}};
    Configuration start2{{{-0.9, 0.01}, {0.8, -0.02}}, 2.5};
    const ContainerResult r2 = container_optimize(two, start2, 2.5, params, lbfgs);
    CHECK_FALSE(r2.fallback);
    CHECK(energy_fresh(two, r2.config) <= params.eps1);
    CHECK(r2.config.container_radius >= 2.0);
    CHECK(r2.config.container_radius <= 2.0 + 1e-4);

    // an already feasible tight input still gets pressure rounds, but the
    // result never regresses past the input
    Configuration tangent{{{-1.0, 0.0}, {1.0, 0.0}}, 2.0};
    const ContainerResult r3 = container_optimize(two, tangent, 2.0, params, lbfgs);
    CHECK_FALSE(r3.fallback);
    CHECK(r3.config.container_radius <= 2.0);
    CHECK(energy_fresh(two, r3.config) <= params.eps1);
    CHECK(r3.rounds >= 1);
}

TEST_CASE("feasibility by inflation") {
    Instance two{"two", {1.0, 1.0}};
    Configuration config{{{-0.5, 0.0}, {0.5, 0.0}}, 1.0};
    REQUIRE(inflate_to_feasible(two, config));
    CHECK(energy_fresh(two, config) == 0.0);
    CHECK(config.container_radius ==
          doctest::Approx(2.0).epsilon(1e-9));  // centers pushed to +-1, radius 1

    Configuration coincident{{{0.2, 0.2}, {0.2, 0.2}}, 1.0};
    CHECK_FALSE(inflate_to_feasible(two, coincident));
}
