#include "sharpsa/schedule.hpp"

#include <cmath>
#include <stdexcept>

#include "sharpsa/errors.hpp"

namespace sharpsa {

StepSchedule StepSchedule::power_law(double a, double u, double gamma) {
    if (!(a > 0.0)) throw ConfigError("schedule: a must be positive");
    if (!(u >= 0.0)) throw ConfigError("schedule: u must be nonnegative");
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("schedule: gamma must lie in [0,1]");
    if (u == 0.0 && gamma > 0.0) throw ConfigError("schedule: u = 0 gives an undefined rate at t = 0");
    StepSchedule s;
    s.staged_ = false;
    s.a_ = a;
    s.u_ = u;
    s.gamma_ = gamma;
    return s;
}

StepSchedule StepSchedule::constant(double alpha) { return power_law(alpha, 1.0, 0.0); }

StepSchedule StepSchedule::staged(std::vector<Stage> stages) {
    if (stages.empty()) throw ConfigError("schedule: staged schedule needs at least one stage");
    double prev = stages.front().rate;
    for (const auto& st : stages) {
        if (!(st.rate > 0.0)) throw ConfigError("schedule: stage rates must be positive");
        if (st.length <= 0) throw ConfigError("schedule: stage lengths must be positive");
        if (st.rate > prev + 1e-15) throw ConfigError("schedule: stage rates must be non-increasing");
        prev = st.rate;
    }
    StepSchedule s;
    s.staged_ = true;
    s.stages_ = std::move(stages);
    s.cum_lengths_.reserve(s.stages_.size());
    long acc = 0;
    for (const auto& st : s.stages_) {
        acc += st.length;
        s.cum_lengths_.push_back(acc);
    }
    return s;
}

double StepSchedule::rate(long t) const {
    if (t < 0) throw std::invalid_argument("schedule: t must be nonnegative");
    if (!staged_) return a_ / std::pow(u_ + static_cast<double>(t), gamma_);
    // Binary search for the first stage whose cumulative length exceeds t.
    std::size_t lo = 0, hi = cum_lengths_.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (t < cum_lengths_[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (lo >= stages_.size()) return stages_.back().rate;  // hold last rate
    return stages_[lo].rate;
}

long StepSchedule::stage_end(std::size_t s) const {
    if (!staged_ || s >= cum_lengths_.size()) throw std::out_of_range("schedule: bad stage index");
    return cum_lengths_[s];
}

long StepSchedule::total_staged_iters() const {
    return cum_lengths_.empty() ? 0 : cum_lengths_.back();
}

StagedPlanA staged_schedule_a(double F, double kappa, double E, double R, double eps_hat,
                              double delta_hat) {
    if (!(F > 0.0) || !(kappa > 0.0) || !(E > 0.0) || !(R > 0.0) || !(eps_hat > 0.0)) {
        throw ConfigError("staged_schedule_a: all arguments must be positive");
    }
    if (!(delta_hat > 0.0 && delta_hat < 1.0)) {
        throw ConfigError("staged_schedule_a: delta_hat must lie in (0,1)");
    }
    if (!(eps_hat < F)) throw ConfigError("staged_schedule_a: eps_hat must be below F");

    const int S = static_cast<int>(std::ceil(std::log2(F / eps_hat)));
    const double log_term = std::log(R * S / delta_hat);
    const long t_s = std::max<long>(1, static_cast<long>(std::ceil(2.0 / (kappa * kappa) * log_term)));

    std::vector<StepSchedule::Stage> stages;
    stages.reserve(static_cast<std::size_t>(S));
    for (int s = 1; s <= S; ++s) {
        double rate = std::pow(2.0, -s) * F * kappa / (E * log_term);
        stages.push_back({rate, t_s});
    }
    StagedPlanA plan;
    plan.schedule = StepSchedule::staged(std::move(stages));
    plan.stages = S;
    plan.total_iters = static_cast<long>(S) * t_s;
    return plan;
}

StepSchedule staged_schedule_b(double a, int s_max) {
    if (!(a > 0.0)) throw ConfigError("staged_schedule_b: a must be positive");
    if (s_max < 1) throw ConfigError("staged_schedule_b: s_max must be at least 1");
    std::vector<StepSchedule::Stage> stages;
    stages.reserve(static_cast<std::size_t>(s_max));
    for (int s = 1; s <= s_max; ++s) {
        double ln = std::log(static_cast<double>(s) + 1.0);
        double rate = a / (std::pow(2.0, s) * ln);
        long length = std::max<long>(1, static_cast<long>(std::ceil(ln * ln)));
        stages.push_back({rate, length});
    }
    return StepSchedule::staged(std::move(stages));
}

}  // namespace sharpsa
