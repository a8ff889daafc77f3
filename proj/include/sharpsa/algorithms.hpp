#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sharpsa/problem.hpp"
#include "sharpsa/schedule.hpp"
#include "sharpsa/trajectory.hpp"

namespace sharpsa {

enum class Algo { psgd, kw, sfw, mab };

Algo algo_from_name(const std::string& name);
std::string algo_name(Algo a);

struct RunConfig {
    StepSchedule schedule = StepSchedule::power_law(1.0, 1.0, 1.0);
    long iters = 1000;
    int batch = 1;  // gradient samples averaged per PSGD step

    // Kiefer-Wolfowitz
    double nu = 1.0;
    bool kw_per_coordinate_noise = false;  // fresh draws per coordinate (variance comparison)

    // Stochastic Frank-Wolfe batch rule: fixed m, or the (3 sigma / kappa alpha)^2 rule.
    std::optional<long> sfw_fixed_batch;
    double sfw_sigma = 1.0;
    double sfw_kappa = 1.0;

    RecordPolicy record;
};

/// Warnings from config/problem cross-checks (e.g. the finite-difference
/// width exceeding the sqrt(kappa/3c) threshold).
std::vector<std::string> validate_config(const Problem& p, Algo algo, const RunConfig& cfg);

/// One projected gradient step: y = x - alpha * mean of `batch` gradient
/// draws, then projection. Second member reports a non-trivial projection
/// (y left the feasible set).
std::pair<Vec, bool> psgd_step(const Problem& p, const Vec& x, double alpha, int batch,
                               RngStream& rng);

/// Central-difference gradient estimate with width nu. One noise draw is
/// shared across all +nu probes and one across all -nu probes per call;
/// per-coordinate fresh draws are available behind the flag.
Vec kw_gradient(const Problem& p, const Vec& x, double nu, RngStream& rng,
                bool per_coordinate_noise = false);

std::pair<Vec, bool> kw_step(const Problem& p, const Vec& x, double alpha, double nu,
                             RngStream& rng, bool per_coordinate_noise = false);

/// Frank-Wolfe step: convex combination with the LMO vertex of the averaged
/// gradient estimate. Never projects; requires alpha in (0,1].
Vec sfw_step(const Problem& p, const Vec& x, double alpha, long m, RngStream& rng);

long sfw_auto_batch(double sigma, double kappa, double alpha);

/// Deterministic core of the importance-sampled simplex update: subtract
/// alpha * cost / p[arm] from the sampled arm, then project to the simplex.
Vec mab_update(const Vec& p, double alpha, int arm, double cost);

struct MabStep {
    Vec p;
    int arm;
    bool clipped;  // degenerate-distribution fallback triggered
};
MabStep mab_step(const Vec& p, double alpha, const std::function<double(int, RngStream&)>& cost,
                 RngStream& rng);

/// Driver loop producing a Trajectory with exact counters. Gaps and distances
/// are computed from the problem's exact oracles at recorded steps.
Trajectory run(const Problem& p, Algo algo, const RunConfig& cfg, RngStream& rng);

struct StagedResult {
    Trajectory traj;
    std::vector<double> stage_errors;  // ||x_hat_s - x*|| at each stage end
    std::vector<double> stage_gaps;
    std::vector<double> ratios;  // err_s / err_{s-1}
};

/// Staged-schedule run with end-of-stage snapshots and per-stage halving ratios.
StagedResult run_staged(const Problem& p, Algo algo, const RunConfig& cfg, RngStream& rng);

}  // namespace sharpsa
