#pragma once

#include <map>
#include <string>

#include "sharpsa/mdp.hpp"
#include "sharpsa/problem.hpp"

namespace sharpsa {

struct CircleOptions {
    double grad_sigma = 1.0;    // per-sample gradient noise N(0, sigma^2 I)
    double value_sigma = 0.1;   // noisy evaluations l(x) + N(0, 0.01)
};
/// Distance objective ||x - (7,7)|| over the radius-15 disk at the origin.
Problem make_circle(const CircleOptions& opts = {});

enum class ThreeSpheresObjective {
    // Sharp linear objective whose unique minimizer is the declared apex
    // (0, 0, sqrt(3)): the negative cost direction is the symmetric interior
    // ray of the apex normal cone, c ~ (0, 1, -3 sqrt(3)) normalized. The
    // coordinate objectives below are *not* sharp anywhere on this set (the
    // sphere boundaries admit tangent arcs with quadratic growth), so only
    // this mode exhibits the O(1/t) regime.
    apex_sharp,
    minus_x1,  // literal -x_1; its true minimizer is (1,0,0)
    minus_x3,  // -x_3; apex-optimal but only quadratically so
};

struct ThreeSpheresOptions {
    ThreeSpheresObjective objective = ThreeSpheresObjective::apex_sharp;
    // For minus_x1, replace the declared apex optimum with the numerically
    // correct maximizer of x_1, which is (1,0,0).
    bool numeric_optimum = false;
    double grad_sigma = 1.0;
    double proj_tol = 1e-10;
};
/// Linear objective over the intersection of three radius-2 spheres centered
/// at (1,0,0), (-1,0,0) and (0,1,0); the optimum sits at the corner where all
/// three boundaries meet.
Problem make_three_spheres(const ThreeSpheresOptions& opts = {});

/// Streaming ridge objective E[(a'x - b)^2]/2 with a ~ N(0, I), b = a'x+ + xi,
/// x+ = (1,-1), over the nonnegative orthant intersected with the radius
/// sqrt(0.9) ball. Optimum (sqrt(0.9), 0).
Problem make_nn_ridge();

struct Lp2Options {
    double cost_sigma = 1.0;  // 5.0 reproduces the covariance-25 variant
};
/// Two-variable LP with sampled costs of mean (4,6). The source problem omits the
/// polytope; this reconstruction is the pentagon with vertices (2,1), (5,1),
/// (5,4), (3.5,5), (2,4), whose unique minimizer under (4,6) is (2,1).
Problem make_lp2(const Lp2Options& opts = {});

/// Linear program over the probability simplex with strictly increasing mean
/// costs c_i = i; optimum is the first unit vector.
Problem make_simplex_lp(int n = 50);

/// Multi-armed-bandit variant: same simplex LP, but the update only observes
/// the sampled arm's cost through importance weighting.
Problem make_mab(int n = 50);

struct Reflected1dOptions {
    bool constrained = true;  // false: interior optimum at -1 (normal regime)
    double x_max = 100.0;
    // Step noise must dominate the O(1) drift for the stationary law to show
    // the reflected-walk exponential profile rather than an atom at the wall.
    double grad_sigma = 10.0;
};
/// One-dimensional (x+1)^2 objective; constrained to [0, x_max] the gradient
/// does not vanish at the optimum.
Problem make_reflected_1d(const Reflected1dOptions& opts = {});

/// Benchmark registry. Overrides are numeric key/value pairs understood per
/// problem (e.g. sigma, obj_coord, constrained, cost_sigma, proj_tol, n).
Problem make_problem(const std::string& name, const std::map<std::string, double>& overrides = {});

std::vector<std::string> benchmark_names();

}  // namespace sharpsa
