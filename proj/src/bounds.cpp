#include "sharpsa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharpsa/errors.hpp"

namespace sharpsa {

Vec sample_feasible(const FeasibleSet& set, RngStream& rng) {
    BoundingBox box = set.bounding_box();
    Vec x(box.lo.size());
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * rng.uniform();
        }
        if (set.contains(x)) return x;
    }
    // Thin or measure-zero set: project the last box sample instead.
    return set.project(x);
}

namespace {
constexpr double kSharpnessPassTol = 1e-3;
}

ConditionReport check_sharpness(const Problem& p, int n_samples, RngStream& rng) {
    if (!p.grad) throw NoGradient();
    if (!p.optimum.known()) throw std::invalid_argument("check_sharpness: optimum unknown");
    if (p.optimum.points.empty()) {
        throw std::invalid_argument("check_sharpness: needs an explicit optimum point set");
    }

    ConditionReport report;
    report.condition = "D1";
    double kappa_hat = std::numeric_limits<double>::infinity();
    double sharp_hat = std::numeric_limits<double>::infinity();
    long used = 0;
    long attempts = 0;
    const long max_attempts = 50L * n_samples + 1000;

    BoundingBox box = p.feasible->bounding_box();
    const double radius_hi = 0.25 * ((box.hi - box.lo).norm() + 1e-6);
    const double radius_lo = 1e-4;

    auto consider = [&](const Vec& x) {
        double dist = p.optimum.distance(x);
        if (dist < 1e-6) return false;
        const Vec* xstar = &p.optimum.points.front();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& pt : p.optimum.points) {
            double d = (x - pt).norm();
            if (d < best) {
                best = d;
                xstar = &pt;
            }
        }
        Vec dir = x - *xstar;
        kappa_hat = std::min(kappa_hat, p.grad(x).dot(dir) / dir.norm());
        if (p.opt_value) sharp_hat = std::min(sharp_hat, (p.objective(x) - *p.opt_value) / dir.norm());
        ++used;
        return true;
    };

    // Half the budget over the whole region, half on shrinking shells around
    // the optimum, where the sharpness infimum actually binds.
    while (used < n_samples / 2 && attempts++ < max_attempts) {
        consider(sample_feasible(*p.feasible, rng));
    }
    while (used < n_samples && attempts++ < max_attempts) {
        const Vec& center = p.optimum.points[static_cast<std::size_t>(used) % p.optimum.points.size()];
        double r = radius_lo * std::pow(radius_hi / radius_lo, rng.uniform());
        Vec dir = rng.gaussian(p.dim);
        Vec x = p.feasible->project(center + (r / dir.norm()) * dir);
        consider(x);
    }
    if (used < n_samples) {
        throw InsufficientStates("check_sharpness: could not sample enough points away from the optimum");
    }
    report.estimate = kappa_hat;
    report.secondary = std::isfinite(sharp_hat) ? sharp_hat : 0.0;
    report.samples = used;
    report.std_error = 0.0;  // min statistic
    report.pass = kappa_hat > kSharpnessPassTol;
    report.note = "kappa_hat (gradient form); secondary: min gap/dist (sharpness form)";
    return report;
}

double polytope_sharpness_K(const std::vector<Vec>& vertices, const Vec& c_bar) {
    if (vertices.empty()) throw std::invalid_argument("polytope_sharpness_K: no vertices");
    Vec c = c_bar / c_bar.norm();
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) vmin = std::min(vmin, c.dot(v));
    std::vector<const Vec*> optimal, suboptimal;
    for (const auto& v : vertices) {
        if (c.dot(v) - vmin <= 1e-9) {
            optimal.push_back(&v);
        } else {
            suboptimal.push_back(&v);
        }
    }
    if (suboptimal.empty()) throw AllOptimal();
    double a = std::numeric_limits<double>::infinity();
    for (const auto* v : suboptimal) a = std::min(a, c.dot(*v) - vmin);
    double D = 0.0;
    for (const auto* vs : optimal) {
        for (const auto* vp : suboptimal) D = std::max(D, (*vs - *vp).norm());
    }
    return a / D;
}

ConditionReport check_drift(const Problem& p, const DriftCheckConfig& cfg, RngStream& rng) {
    if (!p.optimum.known() && cfg.lyapunov == DriftLyapunov::distance) {
        throw std::invalid_argument("check_drift: distance Lyapunov needs an optimum oracle");
    }
    auto lyap = [&p, &cfg](const Vec& x) {
        return cfg.lyapunov == DriftLyapunov::distance ? p.optimum.distance(x) : p.gap(x);
    };

    const double threshold = cfg.alpha * cfg.B;
    std::vector<Vec> states;
    long attempts = 0;
    const long max_attempts = 1000L * cfg.n_states + 1000;
    while (static_cast<long>(states.size()) < cfg.n_states && attempts++ < max_attempts) {
        Vec x = sample_feasible(*p.feasible, rng);
        if (lyap(x) >= threshold) states.push_back(std::move(x));
    }
    if (static_cast<long>(states.size()) < cfg.n_states) {
        throw InsufficientStates("check_drift: no states above the alpha*B threshold");
    }

    ConditionReport report;
    report.condition = "C1";
    double worst_mean = -std::numeric_limits<double>::infinity();
    double worst_se = 0.0;
    bool all_pass = true;
    for (const auto& x : states) {
        double f0 = lyap(x);
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < cfg.n_inner; ++i) {
            Vec next;
            switch (cfg.algo) {
                case Algo::psgd: next = psgd_step(p, x, cfg.alpha, cfg.batch, rng).first; break;
                case Algo::kw: next = kw_step(p, x, cfg.alpha, cfg.nu, rng).first; break;
                case Algo::sfw: next = sfw_step(p, x, std::min(cfg.alpha, 1.0), cfg.batch, rng); break;
                case Algo::mab: throw std::invalid_argument("check_drift: unsupported algorithm");
            }
            double delta = lyap(next) - f0;
            sum += delta;
            sumsq += delta * delta;
        }
        double mean = sum / cfg.n_inner;
        double var = std::max(0.0, sumsq / cfg.n_inner - mean * mean);
        double se = std::sqrt(var / cfg.n_inner);
        if (mean + 2.0 * se > -cfg.alpha * cfg.kappa) all_pass = false;
        if (mean > worst_mean) {
            worst_mean = mean;
            worst_se = se;
        }
    }
    report.estimate = worst_mean;
    report.std_error = worst_se;
    report.secondary = -cfg.alpha * cfg.kappa;
    report.samples = static_cast<long>(states.size()) * cfg.n_inner;
    report.pass = all_pass;
    report.note = "worst E[f(x+) - f(x)] vs -alpha*kappa (factor-2 slack on C1)";
    return report;
}

std::vector<MgfPoint> empirical_mgf(const std::vector<double>& samples,
                                    const std::vector<double>& lambdas) {
    std::vector<MgfPoint> curve;
    curve.reserve(lambdas.size());
    if (samples.empty()) throw std::invalid_argument("empirical_mgf: no samples");
    for (double z : samples) {
        if (!std::isfinite(z)) throw std::invalid_argument("empirical_mgf: non-finite sample");
    }
    const double n = static_cast<double>(samples.size());
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw std::invalid_argument("empirical_mgf: lambda grid must be positive");
        double d_sum = 0.0, d_sumsq = 0.0, e_sum = 0.0, e_sumsq = 0.0, max_term = 0.0;
        for (double z : samples) {
            double ez = std::exp(lambda * z);
            double eterm = (ez - 1.0 - lambda * z) / (lambda * lambda);
            d_sum += ez;
            d_sumsq += ez * ez;
            e_sum += eterm;
            e_sumsq += eterm * eterm;
            max_term = std::max(max_term, ez);
        }
        MgfPoint pt;
        pt.lambda = lambda;
        pt.D_hat = d_sum / n;
        pt.E_hat = e_sum / n;
        double d_var = std::max(0.0, d_sumsq / n - pt.D_hat * pt.D_hat);
        double e_var = std::max(0.0, e_sumsq / n - pt.E_hat * pt.E_hat);
        pt.D_se = std::sqrt(d_var / n);
        pt.E_se = std::sqrt(e_var / n);
        pt.max_dominated = max_term >= 0.5 * d_sum;
        curve.push_back(pt);
    }
    return curve;
}

namespace {

double power_rate(double a, double u, double gamma, double t) {
    return a / std::pow(u + t, gamma);
}

// Smallest t with (alpha_t - alpha_{t+1}) / alpha_t < kappa / 2B; the
// decrement ratio of a power-law schedule is decreasing in t, so binary
// search applies.
long compute_T0(double a, double u, double gamma, double kappa, double B) {
    (void)a;
    if (gamma == 0.0) return 0;
    double threshold = kappa / (2.0 * B);
    auto ratio = [u, gamma](double t) {
        return 1.0 - std::pow((u + t) / (u + t + 1.0), gamma);
    };
    if (ratio(0.0) < threshold) return 0;
    long lo = 0, hi = 1;
    while (!(ratio(static_cast<double>(hi)) < threshold)) {
        hi *= 2;
        if (hi > (1L << 60)) throw InvalidRegime("T0 out of range");
    }
    while (lo + 1 < hi) {
        long mid = lo + (hi - lo) / 2;
        if (ratio(static_cast<double>(mid)) < threshold) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

BoundConstants bound_constants(double kappa, double lambda, double B, double F, double D,
                               double E, double gamma, double a, double u) {
    if (!(kappa > 0.0) || !(lambda > 0.0) || !(B > 0.0) || !(F > 0.0) || !(D > 0.0) || !(E > 0.0) ||
        !(a > 0.0) || !(u > 0.0)) {
        throw InvalidRegime("bound_constants: primitives must be positive");
    }
    if (gamma < 0.0 || gamma > 1.0) throw InvalidRegime("bound_constants: gamma must lie in [0,1]");

    BoundConstants bc;
    bc.kappa = kappa;
    bc.lambda = lambda;
    bc.B = B;
    bc.F = F;
    bc.D = D;
    bc.E = E;
    bc.gamma = gamma;
    bc.a = a;
    bc.u = u;

    const double alpha0 = power_rate(a, u, gamma, 0.0);
    bc.G = std::pow(0.25, gamma);
    bc.n = gamma < 1.0 ? 1 : 1 + static_cast<long>(std::ceil((alpha0 * B + F) / (a * std::log(2.0))));
    bc.Q = std::min(lambda, kappa / (2.0 * E));

    const double Gn = std::pow(bc.G, static_cast<double>(bc.n));
    bc.J = bc.Q * Gn;
    const double half_exponent = kappa * bc.Q * Gn / 2.0;
    bc.H = D * std::exp(half_exponent) / (1.0 - std::exp(-half_exponent));
    bc.R = 1.0 + D * std::exp(bc.Q * kappa / 2.0) / (1.0 - std::exp(-bc.Q * kappa / 2.0)) *
                     std::exp(bc.Q * B);

    bc.T0 = compute_T0(a, u, gamma, kappa, B);
    if (gamma < 1.0) {
        bc.T1 = static_cast<long>(
            std::ceil(u + std::pow(2.0, 1.0 + gamma) / (a * std::pow(u, -gamma)) * (alpha0 * B + F)));
    } else {
        bc.T1 = static_cast<long>(std::ceil(u * std::pow(2.0, static_cast<double>(bc.n))));
    }
    bc.T2 = std::max(bc.T0, bc.T1);

    const double alpha_T2 = power_rate(a, u, gamma, static_cast<double>(bc.T2));
    if (!(F / alpha_T2 - B > 0.0)) {
        throw InvalidRegime("bound_constants: need B < F / alpha at T2");
    }
    bc.I = (1.0 + bc.H) * std::exp(bc.Q * bc.G / (F / alpha_T2 - B));
    bc.K = bc.I / bc.J;
    return bc;
}

double tail_bound(const BoundConstants& bc, double alpha_t, double z) {
    if (z < 0.0) throw std::invalid_argument("tail_bound: z must be nonnegative");
    return std::min(1.0, bc.I * std::exp(-bc.J * z / alpha_t));
}

std::pair<double, double> uniform_mle_tail(double theta, long n, double z) {
    if (!(theta > 0.0) || n < 1) throw std::invalid_argument("uniform_mle_tail: bad parameters");
    if (z < 0.0 || z > static_cast<double>(n) * theta) {
        throw std::out_of_range("uniform_mle_tail: z outside [0, n theta]");
    }
    double exact = std::pow(1.0 - z / (static_cast<double>(n) * theta), static_cast<double>(n));
    double limit = std::exp(-z / theta);
    return {exact, limit};
}

double interior_margin(const Problem& p, int n_directions, RngStream& rng) {
    if (p.optimum.points.empty()) throw std::invalid_argument("interior_margin: needs optimum points");
    BoundingBox box = p.feasible->bounding_box();
    double scale = (box.hi - box.lo).norm() + 1.0;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& xstar : p.optimum.points) {
        if (!p.feasible->contains(xstar, 1e-7)) return 0.0;
        for (int k = 0; k < n_directions; ++k) {
            Vec dir = rng.gaussian(p.dim);
            dir /= dir.norm();
            // exit distance along dir by bisection
            double lo = 0.0, hi = scale;
            if (p.feasible->contains(xstar + hi * dir)) continue;  // never exits within scale
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if (p.feasible->contains(xstar + mid * dir)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            margin = std::min(margin, lo);
        }
    }
    return std::isfinite(margin) ? margin : scale;
}

KwBiasProfile kw_bias_profile(const Problem& p, const Vec& x, const std::vector<double>& nus) {
    if (!p.grad) throw NoGradient();
    KwBiasProfile profile;
    profile.nus = nus;
    Vec g = p.grad(x);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long m = 0;
    for (double nu : nus) {
        Vec fd(p.dim);
        for (int i = 0; i < p.dim; ++i) {
            Vec xp = x, xm = x;
            xp[i] += nu;
            xm[i] -= nu;
            fd[i] = (p.objective(xp) - p.objective(xm)) / (2.0 * nu);
        }
        double bias = (g - fd).norm();
        profile.biases.push_back(bias);
        profile.c_hat = std::max(profile.c_hat, bias / (nu * nu));
        if (bias > 0.0) {
            double lx = std::log(nu), ly = std::log(bias);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
    }
    if (m >= 2) {
        double denom = m * sxx - sx * sx;
        profile.loglog_slope = (m * sxy - sx * sy) / denom;
    }
    return profile;
}

}  // namespace sharpsa
