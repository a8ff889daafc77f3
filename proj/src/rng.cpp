#include "sharpsa/rng.hpp"

#include <stdexcept>

namespace sharpsa {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replication_index)
    : master_(master_seed), rep_(replication_index) {
    // Two rounds of the counter hash decorrelate nearby (seed, rep) pairs.
    std::uint64_t s = splitmix64(master_seed ^ splitmix64(0x5851f42d4c957f2dULL * (replication_index + 1)));
    engine_.seed(s);
}

double RngStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(engine_);
}

Vec RngStream::gaussian(int dim, double sd) {
    Vec v(dim);
    std::normal_distribution<double> n(0.0, sd);
    for (int i = 0; i < dim; ++i) v[i] = n(engine_);
    return v;
}

int RngStream::categorical(const Vec& weights) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("categorical: negative weight");
        total += weights[i];
    }
    if (total <= 0.0) throw std::invalid_argument("categorical: zero weight vector");
    double u = uniform() * total;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
}

}  // namespace sharpsa
