#pragma once

#include <functional>
#include <span>
#include <vector>

#include "circlepack/penalty.hpp"

namespace packing {

// Objective whose evaluation depends on a cached adjacency structure.
// value_and_gradient must use the cached structure as is; refresh_adjacency
// rebuilds it from the given point and reports whether it changed.
class AamObjective {
public:
    virtual ~AamObjective() = default;
    virtual double value_and_gradient(std::span<const double> x,
                                      std::span<double> grad) const = 0;
    virtual bool refresh_adjacency(std::span<const double> x) = 0;
};

struct LbfgsConfig {
    int history = 7;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    double initial_step = 1.0;
    int max_iters = 10000;
    double grad_tol = 1e-10;
};

// Doubling-interval adjacency refresh: rebuild after len steps; a changed set
// resets the interval to 1, an unchanged one doubles it.
struct AamState {
    int cnt = 0;
    int len = 1;
    AdjacencySet gamma;
};

AamState aam_step(AamState state, std::span<const double> radii, std::span<const double> xy);

struct LayoutResult {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// L-BFGS with a strong Wolfe line search. A candidate stop is accepted only
// after the adjacency structure is rebuilt at that point and the gradient norm
// still passes; otherwise optimization resumes. project, when given, is applied
// to the iterate after every accepted step.
LayoutResult layout_optimize(AamObjective& f, std::vector<double> x0, const LbfgsConfig& cfg,
                             const std::function<void(std::span<double>)>& project = {});

// Penalty energy at fixed container radius, over the 2n center coordinates.
class PenaltyObjective final : public AamObjective {
public:
    PenaltyObjective(const Instance& instance, double R)
        : instance_(&instance), R_(R) {}

    double value_and_gradient(std::span<const double> x,
                              std::span<double> grad) const override;
    bool refresh_adjacency(std::span<const double> x) override;
    const AdjacencySet& adjacency() const { return gamma_; }

private:
    const Instance* instance_;
    double R_;
    AdjacencySet gamma_;
};

// Penalty energy plus rho * R^2 over 2n + 1 variables; x[2n] is the container
// radius.
class AugmentedObjective final : public AamObjective {
public:
    AugmentedObjective(const Instance& instance, double rho)
        : instance_(&instance), rho_(rho) {}

    double value_and_gradient(std::span<const double> x,
                              std::span<double> grad) const override;
    bool refresh_adjacency(std::span<const double> x) override;

private:
    const Instance* instance_;
    double rho_;
    AdjacencySet gamma_;
};

double augmented_energy(const Instance& instance, std::span<const double> z, double rho,
                        const AdjacencySet& gamma);
void augmented_gradient(const Instance& instance, std::span<const double> z, double rho,
                        const AdjacencySet& gamma, std::span<double> grad);

struct ContainerResult {
    Configuration config;
    bool fallback = false;  // round cap hit; result is the inflated best effort
    int rounds = 0;
};

// Minimizes the container radius from (start, R0) by halving the radius
// pressure rho each round until the layout is overlap free (energy <= eps1).
ContainerResult container_optimize(const Instance& instance, const Configuration& start,
                                   double R0, const SolverParams& params,
                                   const LbfgsConfig& lbfgs);

// Scales centers out by the least factor clearing all pairwise overlaps, then
// sets R to the exact containment bound. Returns false when a coincident pair
// makes that impossible.
bool inflate_to_feasible(const Instance& instance, Configuration& config);

}  // namespace packing
