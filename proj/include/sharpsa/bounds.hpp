#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sharpsa/algorithms.hpp"
#include "sharpsa/problem.hpp"

namespace sharpsa {

struct ConditionReport {
    std::string condition;  // "D1", "C1", "C2", "D3", ...
    double estimate = 0.0;  // headline statistic (kappa-hat, worst drift, ...)
    double secondary = 0.0;
    double std_error = 0.0;
    long samples = 0;
    bool pass = false;
    std::string note;
};

/// Draws a feasible point: rejection sampling over the bounding box, falling
/// back to projecting box samples when the set has empty interior.
Vec sample_feasible(const FeasibleSet& set, RngStream& rng);

/// Gradient condition (D1): kappa-hat is the minimum over sampled feasible
/// points of grad(x)'(x - x*) / ||x - x*||; `secondary` carries the sharpness
/// form min (l(x) - l*) / ||x - x*||. Points within 1e-6 of the optimum set
/// are excluded.
ConditionReport check_sharpness(const Problem& p, int n_samples, RngStream& rng);

/// Sharpness constant K = a / D of a bounded polytope under a linear
/// objective (vertex partition into optimal and suboptimal sets). Throws
/// AllOptimal when the objective is constant on the polytope.
double polytope_sharpness_K(const std::vector<Vec>& vertices, const Vec& c_bar);

enum class DriftLyapunov { distance, gap };

struct DriftCheckConfig {
    Algo algo = Algo::psgd;
    double alpha = 0.01;
    int batch = 1;
    double nu = 1.0;  // KW width
    double kappa = 1.0;
    double B = 10.0;
    int n_states = 20;
    int n_inner = 10000;
    DriftLyapunov lyapunov = DriftLyapunov::distance;
};

/// Drift condition (C1): Monte Carlo estimate of the expected one-step change
/// of the Lyapunov quantity at sampled states above the alpha*B threshold.
/// Passes when every state's estimate + 2 SE clears -alpha*kappa.
ConditionReport check_drift(const Problem& p, const DriftCheckConfig& cfg, RngStream& rng);

struct MgfPoint {
    double lambda;
    double D_hat, D_se;  // mean exp(lambda z)
    double E_hat, E_se;  // mean (exp(lambda z) - 1 - lambda z)/lambda^2
    bool max_dominated;  // largest sample contributes most of the mean
};

/// Empirical moment generating function curve for condition (C2)/(D2).
std::vector<MgfPoint> empirical_mgf(const std::vector<double>& samples,
                                    const std::vector<double>& lambdas);

/// The constant table behind the exponential tail bound, recomputable from
/// the primitives (kappa, lambda, B, F, D, E) and the schedule (gamma, a, u).
struct BoundConstants {
    double kappa, lambda, B, F, D, E;
    double gamma, a, u;
    double G;
    long n;
    double Q, H, I, J, K, R;
    long T0, T1, T2;
};

BoundConstants bound_constants(double kappa, double lambda, double B, double F, double D,
                               double E, double gamma, double a, double u);

/// Tail bound min(1, I exp(-J z / alpha_t)) from the constant table.
double tail_bound(const BoundConstants& bc, double alpha_t, double z);

/// Uniform-distribution MLE tail: exact (1 - z/(n theta))^n and its
/// exponential limit exp(-z/theta), for 0 <= z <= n theta.
std::pair<double, double> uniform_mle_tail(double theta, long n, double z);

/// Condition (E2) margin: distance from the optimum set to the boundary of
/// the feasible set, estimated by bisection along random directions. Zero
/// for boundary optima.
double interior_margin(const Problem& p, int n_directions, RngStream& rng);

struct KwBiasProfile {
    std::vector<double> nus;
    std::vector<double> biases;  // ||grad - central difference|| (noiseless)
    double loglog_slope = 0.0;   // ~2 for C^3 objectives
    double c_hat = 0.0;          // max bias / nu^2
};

/// Condition (D3) probe: noiseless central-difference bias across a nu grid.
KwBiasProfile kw_bias_profile(const Problem& p, const Vec& x, const std::vector<double>& nus);

}  // namespace sharpsa
