#pragma once

#include <cstdint>
#include <vector>

namespace sharpsa {

/// Step-size schedule: either a power law a/(u+t)^gamma or a staged
/// piecewise-constant sequence of (rate, length) stages. Rates are positive
/// and non-increasing in t; past the last stage the last rate is held.
class StepSchedule {
  public:
    struct Stage {
        double rate;
        long length;
    };

    StepSchedule() = default;  // power law 1/(1+t)

    static StepSchedule power_law(double a, double u, double gamma);
    static StepSchedule constant(double alpha);  // power law with gamma = 0
    static StepSchedule staged(std::vector<Stage> stages);

    double rate(long t) const;

    bool is_staged() const { return staged_; }
    bool is_power_law() const { return !staged_; }

    // Power-law parameters (valid when is_power_law()).
    double a() const { return a_; }
    double u() const { return u_; }
    double gamma() const { return gamma_; }

    const std::vector<Stage>& stages() const { return stages_; }

    /// Iteration index at which stage s (0-based) ends, i.e. sum of the
    /// first s+1 stage lengths.
    long stage_end(std::size_t s) const;
    long total_staged_iters() const;

  private:
    bool staged_ = false;
    double a_ = 1.0, u_ = 1.0, gamma_ = 1.0;
    std::vector<Stage> stages_;
    std::vector<long> cum_lengths_;
};

/// Stage count and schedule from the error-halving recipe: S = ceil(log2(F/eps)),
/// per-stage rate 2^{-s} F kappa / (E log(R S / delta)) and length
/// ceil((2/kappa^2) log(R S / delta)).
struct StagedPlanA {
    StepSchedule schedule;
    int stages;
    long total_iters;
};
StagedPlanA staged_schedule_a(double F, double kappa, double E, double R, double eps_hat,
                              double delta_hat);

/// Parameter-light staged schedule: rate a / (2^s log(s+1)), length
/// ceil(log^2(s+1)) (natural log, length at least 1) for s = 1..s_max.
StepSchedule staged_schedule_b(double a, int s_max);

}  // namespace sharpsa
