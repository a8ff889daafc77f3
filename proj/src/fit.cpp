#include "sharpsa/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "sharpsa/algorithms.hpp"
#include "sharpsa/errors.hpp"

namespace sharpsa {

namespace {

struct Ols {
    double slope = 0.0, intercept = 0.0, r2 = 1.0;
};

Ols ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    Ols fit;
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InsufficientData("ols: degenerate abscissa");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    double mean_y = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r2 = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

}  // namespace

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& series, double t_min) {
    SlopeFit out;
    std::vector<double> xs, ys;
    out.t_lo = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : series) {
        if (t < t_min || t <= 0.0) continue;
        if (!(v > 0.0)) {
            ++out.dropped_nonpositive;
            continue;
        }
        xs.push_back(std::log(t));
        ys.push_back(std::log(v));
        out.t_lo = std::min(out.t_lo, t);
        out.t_hi = std::max(out.t_hi, t);
    }
    if (xs.size() < 10) throw InsufficientData("fit_loglog: fewer than 10 usable points");
    // Trajectories are recorded densely early and geometrically later; thin to
    // a log-uniform abscissa so the regression weights decades evenly, the way
    // a line fitted on log-log axes does.
    if (xs.size() > 40) {
        double span = xs.back() - xs.front();
        double min_step = span / 400.0;
        std::vector<double> txs, tys;
        double last = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] - last >= min_step || i + 1 == xs.size()) {
                txs.push_back(xs[i]);
                tys.push_back(ys[i]);
                last = xs[i];
            }
        }
        if (txs.size() >= 10) {
            xs = std::move(txs);
            ys = std::move(tys);
        }
    }
    out.n_points = static_cast<long>(xs.size());
    Ols fit = ols(xs, ys);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.r2 = fit.r2;
    return out;
}

TailFit fit_tail(std::vector<double> samples, double alpha_t, double q_lo, double q_hi) {
    if (samples.size() < 1000) throw InsufficientData("fit_tail: fewer than 1000 samples");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    std::size_t lo = static_cast<std::size_t>(q_lo * static_cast<double>(n));
    std::size_t hi = static_cast<std::size_t>(q_hi * static_cast<double>(n));
    hi = std::min(hi, n - 1);

    std::vector<double> zs, logccdf;
    std::size_t stride = std::max<std::size_t>(1, (hi - lo) / 512);
    for (std::size_t i = lo; i < hi; i += stride) {
        double ccdf = static_cast<double>(n - i) / static_cast<double>(n);  // P(X >= z_i)
        if (ccdf <= 0.0) break;
        zs.push_back(samples[i]);
        logccdf.push_back(std::log(ccdf));
    }
    if (zs.size() < 10) throw InsufficientData("fit_tail: quantile window too narrow");
    Ols fit = ols(zs, logccdf);
    TailFit out;
    out.J_hat = -fit.slope * alpha_t;
    out.r2 = fit.r2;
    out.n_points = static_cast<long>(zs.size());
    return out;
}

void parallel_reps(int reps, int threads, const std::function<void(int)>& work) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, reps));
    if (threads == 1) {
        for (int r = 0; r < reps; ++r) work(r);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= reps) return;
                try {
                    work(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> final_gap_samples(const Problem& p, double alpha, long iters, int reps,
                                      std::uint64_t seed, int threads) {
    std::vector<double> gaps(static_cast<std::size_t>(reps));
    RunConfig cfg;
    cfg.schedule = StepSchedule::constant(alpha);
    cfg.iters = iters;
    cfg.record.final_only = true;
    parallel_reps(reps, threads, [&](int r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        Trajectory traj = run(p, Algo::psgd, cfg, rng);
        gaps[static_cast<std::size_t>(r)] = p.gap(traj.final_x);
    });
    return gaps;
}

TailScaling tail_rate_scaling(const Problem& p, const std::vector<double>& alphas, int reps,
                              long iters, std::uint64_t seed, int threads) {
    TailScaling out;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        double alpha = alphas[i];
        auto gaps = final_gap_samples(p, alpha, iters, reps, seed + i, threads);
        TailFit fit = fit_tail(std::move(gaps), alpha);
        out.rows.push_back({alpha, fit.J_hat, fit.r2});
    }
    if (out.rows.size() < 2) {
        out.pass = false;  // single row: no scaling verdict
        return out;
    }
    std::vector<double> xs, ys;
    for (const auto& row : out.rows) {
        if (row.J_hat <= 0.0) {
            out.pass = false;
            return out;
        }
        xs.push_back(std::log(row.alpha));
        ys.push_back(std::log(row.J_hat));
    }
    Ols fit = ols(xs, ys);
    out.log_slope = fit.slope;
    out.pass = std::abs(fit.slope) <= 0.25;
    return out;
}

}  // namespace sharpsa
