#include "sharpsa/algorithms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sharpsa/errors.hpp"

namespace sharpsa {

Algo algo_from_name(const std::string& name) {
    if (name == "psgd") return Algo::psgd;
    if (name == "kw") return Algo::kw;
    if (name == "sfw") return Algo::sfw;
    if (name == "mab") return Algo::mab;
    throw ConfigError("unknown algorithm: " + name);
}

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::psgd: return "psgd";
        case Algo::kw: return "kw";
        case Algo::sfw: return "sfw";
        case Algo::mab: return "mab";
    }
    return "?";
}

std::vector<std::string> validate_config(const Problem& p, Algo algo, const RunConfig& cfg) {
    std::vector<std::string> warnings;
    if (cfg.batch < 1) throw ConfigError("batch must be at least 1");
    if (cfg.iters < 0) throw ConfigError("iters must be nonnegative");
    if (algo == Algo::kw) {
        if (!(cfg.nu > 0.0)) throw ConfigError("kw: nu must be positive");
        if (!p.value) throw ConfigError("kw: problem has no noisy value oracle");
        if (p.kappa && p.curvature_c && *p.curvature_c > 0.0) {
            double threshold = std::sqrt(*p.kappa / (3.0 * *p.curvature_c));
            if (cfg.nu > threshold) {
                warnings.push_back("kw: nu=" + std::to_string(cfg.nu) +
                                   " exceeds sqrt(kappa/3c)=" + std::to_string(threshold) +
                                   "; concentration guarantee does not apply");
            }
        }
    }
    if (algo == Algo::sfw) {
        if (!p.feasible->has_lmo()) throw MissingLmo();
        if (cfg.sfw_fixed_batch && *cfg.sfw_fixed_batch < 1) throw ConfigError("sfw: batch must be at least 1");
        if (!cfg.sfw_fixed_batch && (!(cfg.sfw_sigma > 0.0) || !(cfg.sfw_kappa > 0.0))) {
            throw ConfigError("sfw: auto batch rule needs positive sigma and kappa");
        }
    }
    if (algo == Algo::mab && !p.arm_cost) throw ConfigError("mab: problem has no arm cost sampler");
    return warnings;
}

std::pair<Vec, bool> psgd_step(const Problem& p, const Vec& x, double alpha, int batch,
                               RngStream& rng) {
    Vec c = sample_grad_batch(p, x, batch, rng);
    Vec y = x - alpha * c;
    bool nontrivial = !p.feasible->contains(y);
    Vec next = nontrivial ? p.feasible->project(y) : std::move(y);
    require_finite(next, "psgd_step");
    return {std::move(next), nontrivial};
}

Vec kw_gradient(const Problem& p, const Vec& x, double nu, RngStream& rng,
                bool per_coordinate_noise) {
    if (!p.value) throw ConfigError("kw_gradient: problem has no noisy value oracle");
    const auto& oracle = *p.value;
    const int d = p.dim;
    Vec g(d);
    if (per_coordinate_noise) {
        for (int i = 0; i < d; ++i) {
            Vec xp = x, xm = x;
            xp[i] += nu;
            xm[i] -= nu;
            double plus = oracle.eval(xp, oracle.draw(rng));
            double minus = oracle.eval(xm, oracle.draw(rng));
            g[i] = (plus - minus) / (2.0 * nu);
        }
        return g;
    }
    auto w_plus = oracle.draw(rng);
    auto w_minus = oracle.draw(rng);
    for (int i = 0; i < d; ++i) {
        Vec xp = x, xm = x;
        xp[i] += nu;
        xm[i] -= nu;
        g[i] = (oracle.eval(xp, w_plus) - oracle.eval(xm, w_minus)) / (2.0 * nu);
    }
    return g;
}

std::pair<Vec, bool> kw_step(const Problem& p, const Vec& x, double alpha, double nu,
                             RngStream& rng, bool per_coordinate_noise) {
    Vec c = kw_gradient(p, x, nu, rng, per_coordinate_noise);
    Vec y = x - alpha * c;
    bool nontrivial = !p.feasible->contains(y);
    Vec next = nontrivial ? p.feasible->project(y) : std::move(y);
    require_finite(next, "kw_step");
    return {std::move(next), nontrivial};
}

long sfw_auto_batch(double sigma, double kappa, double alpha) {
    double root = 3.0 * sigma / (kappa * alpha);
    return std::max<long>(1, static_cast<long>(std::ceil(root * root)));
}

Vec sfw_step(const Problem& p, const Vec& x, double alpha, long m, RngStream& rng) {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::invalid_argument("sfw_step: alpha must lie in (0,1]");
    if (m < 1) throw std::invalid_argument("sfw_step: batch must be at least 1");
    Vec c = p.sample_grad(x, rng);
    for (long i = 1; i < m; ++i) c += p.sample_grad(x, rng);
    c /= static_cast<double>(m);
    Vec v = p.feasible->lmo(c);
    Vec next = (1.0 - alpha) * x + alpha * v;
    require_finite(next, "sfw_step");
    return next;
}

namespace {
constexpr double kMinArmProb = 1e-12;
}

Vec mab_update(const Vec& p, double alpha, int arm, double cost) {
    Vec q = p;
    q[arm] -= alpha * cost / p[arm];
    return project_simplex(q);
}

MabStep mab_step(const Vec& p, double alpha, const std::function<double(int, RngStream&)>& cost,
                 RngStream& rng) {
    Vec probs = p;
    bool clipped = false;
    if (probs.minCoeff() < kMinArmProb) {
        probs = probs.cwiseMax(kMinArmProb);
        probs /= probs.sum();
        clipped = true;
    }
    int arm = rng.categorical(probs);
    Vec next = mab_update(probs, alpha, arm, cost(arm, rng));
    return {std::move(next), arm, clipped};
}

namespace {

void record_point(Trajectory& traj, const Problem& p, long t, double alpha, const Vec& x,
                  bool nontrivial) {
    TrajPoint pt;
    pt.t = t;
    pt.alpha = alpha;
    pt.gap = p.gap(x);
    pt.dist = p.optimum.known() ? p.optimum.distance(x) : std::numeric_limits<double>::quiet_NaN();
    pt.nontrivial_projection = nontrivial;
    traj.points.push_back(pt);
}

}  // namespace

namespace {

// Shared driver; `on_step` sees the 1-based iteration index after each step.
Trajectory run_core(const Problem& p, Algo algo, const RunConfig& cfg, RngStream& rng,
                    const std::function<void(long, const Vec&)>& on_step) {
    validate_config(p, algo, cfg);
    Trajectory traj;
    Vec x = p.initial_point();
    require_finite(x, "initial point");

    long next_record = 0;
    if (!cfg.record.final_only && cfg.record.records(0)) {
        record_point(traj, p, 0, cfg.schedule.rate(0), x, false);
        next_record = cfg.record.next_checkpoint(0);
    }

    for (long t = 0; t < cfg.iters; ++t) {
        double alpha = cfg.schedule.rate(t);
        bool nontrivial = false;
        try {
            switch (algo) {
                case Algo::psgd: {
                    auto [next, nt] = psgd_step(p, x, alpha, cfg.batch, rng);
                    x = std::move(next);
                    nontrivial = nt;
                    break;
                }
                case Algo::kw: {
                    auto [next, nt] = kw_step(p, x, alpha, cfg.nu, rng, cfg.kw_per_coordinate_noise);
                    x = std::move(next);
                    nontrivial = nt;
                    break;
                }
                case Algo::sfw: {
                    long m = cfg.sfw_fixed_batch ? *cfg.sfw_fixed_batch
                                                 : sfw_auto_batch(cfg.sfw_sigma, cfg.sfw_kappa, alpha);
                    x = sfw_step(p, x, std::min(alpha, 1.0), m, rng);
                    break;
                }
                case Algo::mab: {
                    auto step = mab_step(x, alpha, p.arm_cost, rng);
                    x = std::move(step.p);
                    if (step.clipped) ++traj.degenerate_clips;
                    break;
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("iteration " + std::to_string(t) + ": " + e.what());
        }
        if (nontrivial) {
            ++traj.nontrivial_projections;
            traj.last_nontrivial_t = t + 1;
        }
        long t_next = t + 1;
        if (!cfg.record.final_only && (t_next >= next_record || t_next == cfg.iters)) {
            if (cfg.record.records(t_next) || t_next == cfg.iters) {
                record_point(traj, p, t_next, cfg.schedule.rate(t_next), x, nontrivial);
            }
            if (t_next >= next_record) next_record = cfg.record.next_checkpoint(t_next);
        }
        if (on_step) on_step(t_next, x);
    }

    traj.final_x = std::move(x);
    traj.iters = cfg.iters;
    return traj;
}

}  // namespace

Trajectory run(const Problem& p, Algo algo, const RunConfig& cfg, RngStream& rng) {
    return run_core(p, algo, cfg, rng, nullptr);
}

StagedResult run_staged(const Problem& p, Algo algo, const RunConfig& cfg, RngStream& rng) {
    if (!cfg.schedule.is_staged()) throw ConfigError("run_staged: schedule is not staged");

    RunConfig inner = cfg;
    inner.iters = cfg.schedule.total_staged_iters();

    StagedResult result;
    std::size_t stage = 0;
    const auto& schedule = cfg.schedule;
    result.traj = run_core(p, algo, inner, rng, [&](long t_next, const Vec& x) {
        while (stage < schedule.stages().size() && t_next == schedule.stage_end(stage)) {
            result.stage_errors.push_back(p.optimum.known()
                                              ? p.optimum.distance(x)
                                              : std::numeric_limits<double>::quiet_NaN());
            result.stage_gaps.push_back(p.gap(x));
            ++stage;
        }
    });

    result.ratios.reserve(result.stage_errors.size());
    for (std::size_t s = 1; s < result.stage_errors.size(); ++s) {
        result.ratios.push_back(result.stage_errors[s] / result.stage_errors[s - 1]);
    }
    return result;
}

}  // namespace sharpsa
