#include "sharpsa/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sharpsa {

double OptimumInfo::distance(const Vec& x) const {
    if (distance_fn) return distance_fn(x);
    if (points.empty()) throw std::logic_error("optimum unknown: no distance oracle");
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : points) d = std::min(d, (x - p).norm());
    return d;
}

OptimumInfo OptimumInfo::point(Vec x) {
    OptimumInfo info;
    info.points.push_back(std::move(x));
    return info;
}

double Problem::gap(const Vec& x) const {
    if (!opt_value) return std::numeric_limits<double>::quiet_NaN();
    return objective(x) - *opt_value;
}

Vec Problem::initial_point() const {
    if (initial) return *initial;
    return feasible->project(Vec::Zero(dim));
}

Vec sample_grad_batch(const Problem& p, const Vec& x, int batch, RngStream& rng) {
    if (batch < 1) throw std::invalid_argument("sample_grad_batch: batch must be at least 1");
    Vec acc = p.sample_grad(x, rng);
    for (int i = 1; i < batch; ++i) acc += p.sample_grad(x, rng);
    return acc / static_cast<double>(batch);
}

}  // namespace sharpsa
