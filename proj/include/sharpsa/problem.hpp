#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "sharpsa/feasible.hpp"
#include "sharpsa/rng.hpp"
#include "sharpsa/vec.hpp"

namespace sharpsa {

/// Where the minimizers are: an explicit point set, a distance oracle, or unknown.
struct OptimumInfo {
    std::vector<Vec> points;
    std::function<double(const Vec&)> distance_fn;

    bool known() const { return !points.empty() || static_cast<bool>(distance_fn); }
    double distance(const Vec& x) const;

    static OptimumInfo point(Vec x);
    static OptimumInfo unknown() { return {}; }
};

/// Noisy function evaluation l(x, w). The noise realization is drawn once and
/// can be reused across evaluation points, which is what the finite-difference
/// estimator needs (the same w+ enters every +nu probe of a step).
struct ValueOracle {
    using Noise = std::vector<double>;
    std::function<Noise(RngStream&)> draw;
    std::function<double(const Vec&, const Noise&)> eval;

    double sample(const Vec& x, RngStream& rng) const { return eval(x, draw(rng)); }
};

/// An optimization instance: exact objective, stochastic oracles, feasible set
/// and whatever is known about the optimum. Instances are immutable after
/// construction and usable from multiple threads.
struct Problem {
    std::string name;
    int dim = 0;

    std::function<double(const Vec&)> objective;             // exact l(x)
    std::function<Vec(const Vec&)> grad;                     // exact (sub)gradient, optional
    std::function<Vec(const Vec&, RngStream&)> sample_grad;  // one unbiased draw
    std::optional<ValueOracle> value;                        // noisy l(x, w), optional

    /// Per-arm noisy cost, used by the importance-sampled simplex update.
    std::function<double(int, RngStream&)> arm_cost;

    std::shared_ptr<const FeasibleSet> feasible;
    OptimumInfo optimum;
    std::optional<double> opt_value;
    std::optional<Vec> initial;

    std::optional<double> kappa;        // known sharpness constant
    std::optional<double> curvature_c;  // known finite-difference bias constant

    double gap(const Vec& x) const;
    Vec initial_point() const;  // problem-specified, else projection of the origin
};

/// Mean of `batch` independent stochastic gradient draws.
Vec sample_grad_batch(const Problem& p, const Vec& x, int batch, RngStream& rng);

}  // namespace sharpsa
