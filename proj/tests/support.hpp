#pragma once

// Shared oracles and helpers for the unit and acceptance suites. Everything
// here is test-only and independent of the library's implementation paths.

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "sharpsa/algorithms.hpp"
#include "sharpsa/fit.hpp"
#include "sharpsa/problems.hpp"

namespace testsupport {

using sharpsa::Vec;

inline Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

inline Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

// Brute-force quadratic-program oracle for the 3-simplex: enumerate the 7
// support patterns; on support S the candidate is x_i - (sum_S x - 1)/|S|.
inline Vec simplex_oracle_3d(const Vec& x) {
    Vec best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < 8; ++mask) {
        double sum = 0.0;
        int size = 0;
        for (int i = 0; i < 3; ++i) {
            if (mask & (1 << i)) {
                sum += x[i];
                ++size;
            }
        }
        double tau = (sum - 1.0) / size;
        Vec p = Vec::Zero(3);
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            if (mask & (1 << i)) {
                p[i] = x[i] - tau;
                if (p[i] < -1e-12) ok = false;
            }
        }
        if (!ok) continue;
        double d = (p - x).norm();
        if (d < best_dist) {
            best_dist = d;
            best = p;
        }
    }
    return best;
}

// Constant objective with a declared optimum: no drift exists anywhere.
inline sharpsa::Problem constant_objective_control() {
    sharpsa::Problem p;
    p.name = "constant-control";
    p.dim = 2;
    p.objective = [](const Vec&) { return 1.0; };
    p.grad = [](const Vec&) { return Vec(Vec::Zero(2)); };
    p.sample_grad = [](const Vec&, sharpsa::RngStream& rng) { return rng.gaussian(2); };
    p.feasible = std::make_shared<sharpsa::PieceSet>(sharpsa::BallPiece(Vec::Zero(2), 10.0));
    p.optimum = sharpsa::OptimumInfo::point(vec2(3.0, 0.0));
    p.opt_value = 1.0;
    return p;
}

struct UnbiasednessResult {
    long tests = 0;
    long violations = 0;
    bool pass() const {
        long allowance =
            std::max<long>(1, static_cast<long>(std::ceil(0.01 * static_cast<double>(tests))));
        return violations <= allowance;
    }
};

// Coordinate-wise 3-SE unbiasedness check of sample_grad against the exact
// gradient, with a small multiple-testing allowance.
inline UnbiasednessResult run_unbiasedness(const sharpsa::Problem& p, int n_points, int n_draws,
                                           std::uint64_t seed) {
    sharpsa::RngStream rng(seed, 0);
    UnbiasednessResult out;
    for (int k = 0; k < n_points; ++k) {
        Vec x = sharpsa::sample_feasible(*p.feasible, rng);
        Vec exact = p.grad(x);
        Vec sum = Vec::Zero(p.dim), sumsq = Vec::Zero(p.dim);
        for (int i = 0; i < n_draws; ++i) {
            Vec g = p.sample_grad(x, rng);
            sum += g;
            sumsq += g.cwiseProduct(g);
        }
        for (int j = 0; j < p.dim; ++j) {
            double mean = sum[j] / n_draws;
            double var = std::max(0.0, sumsq[j] / n_draws - mean * mean);
            double se = std::sqrt(var / n_draws);
            ++out.tests;
            if (std::abs(mean - exact[j]) > 3.0 * se + 1e-12) ++out.violations;
        }
    }
    return out;
}

inline double sample_skewness(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

// Mean trajectory over seeded replications, then a log-log slope fit.
struct BenchFit {
    sharpsa::SlopeFit fit;
    double wall_seconds = 0.0;
};

inline BenchFit mean_series_fit(const sharpsa::Problem& p, sharpsa::Algo algo,
                                const sharpsa::RunConfig& rc, int reps, std::uint64_t seed,
                                bool use_gap, double t_min = 100.0, int threads = 0) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<sharpsa::Trajectory> trajs(static_cast<std::size_t>(reps));
    sharpsa::parallel_reps(reps, threads, [&](int r) {
        sharpsa::RngStream rng(seed, static_cast<std::uint64_t>(r));
        trajs[static_cast<std::size_t>(r)] = sharpsa::run(p, algo, rc, rng);
    });
    std::vector<std::pair<double, double>> series;
    const auto& grid = trajs.front().points;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double acc = 0.0;
        for (const auto& traj : trajs) {
            acc += use_gap ? traj.points[i].gap : traj.points[i].dist;
        }
        series.emplace_back(static_cast<double>(grid[i].t), acc / reps);
    }
    BenchFit out;
    out.fit = sharpsa::fit_loglog(series, t_min);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace testsupport
