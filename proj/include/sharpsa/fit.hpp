#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sharpsa/problem.hpp"

namespace sharpsa {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    long n_points = 0;
    long dropped_nonpositive = 0;
};

/// OLS of log(value) on log(t) over points past the burn-in t_min.
/// Non-positive values are dropped (count reported); fewer than 10 surviving
/// points raises InsufficientData.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& series, double t_min);

struct TailFit {
    double J_hat = 0.0;  // -slope * alpha_t of log CCDF vs z
    double r2 = 0.0;
    long n_points = 0;
};

/// Exponential tail fit: OLS of log empirical CCDF against z over the sample
/// quantile window [q_lo, q_hi]. Needs at least 1000 samples.
TailFit fit_tail(std::vector<double> samples, double alpha_t, double q_lo = 0.5,
                 double q_hi = 0.99);

struct TailScalingRow {
    double alpha;
    double J_hat;
    double r2;
};

struct TailScaling {
    std::vector<TailScalingRow> rows;
    std::optional<double> log_slope;  // slope of log J_hat vs log alpha
    bool pass = false;                // |log_slope| <= 0.25 (single alpha: no verdict)
};

/// Runs fixed-step experiments per alpha and checks that the fitted tail
/// exponent J_hat is approximately alpha-independent.
TailScaling tail_rate_scaling(const Problem& p, const std::vector<double>& alphas, int reps,
                              long iters, std::uint64_t seed, int threads);

/// Final-iterate gap samples across seeded replications of constant-step PSGD.
std::vector<double> final_gap_samples(const Problem& p, double alpha, long iters, int reps,
                                      std::uint64_t seed, int threads);

/// Worker pool over replication indices [0, reps).
void parallel_reps(int reps, int threads, const std::function<void(int)>& work);

}  // namespace sharpsa
