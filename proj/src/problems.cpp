#include "sharpsa/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "sharpsa/errors.hpp"

namespace sharpsa {

Problem make_circle(const CircleOptions& opts) {
    Vec target(2);
    target << 7.0, 7.0;
    Vec center = Vec::Zero(2);

    Problem p;
    p.name = "circle";
    p.dim = 2;
    p.objective = [target](const Vec& x) { return (x - target).norm(); };
    p.grad = [target](const Vec& x) {
        Vec d = x - target;
        double n = d.norm();
        if (n < 1e-15) return Vec(Vec::Zero(2));  // subgradient at the optimum
        return Vec(d / n);
    };
    double sigma = opts.grad_sigma;
    auto grad = p.grad;
    p.sample_grad = [grad, sigma](const Vec& x, RngStream& rng) {
        return Vec(grad(x) + rng.gaussian(2, sigma));
    };
    double vs = opts.value_sigma;
    auto obj = p.objective;
    p.value = ValueOracle{
        [vs](RngStream& rng) { return ValueOracle::Noise{rng.normal(0.0, vs)}; },
        [obj](const Vec& x, const ValueOracle::Noise& w) { return obj(x) + w[0]; },
    };
    p.feasible = std::make_shared<PieceSet>(BallPiece(center, 15.0));
    p.optimum = OptimumInfo::point(target);
    p.opt_value = 0.0;
    p.kappa = 1.0;  // unit gradient of the distance function
    // Interior start a few units from the optimum. With alpha_t = 1/(1+t) the
    // approach phase covers distance log(t), so a far start would spend the
    // whole run in transit instead of the O(1/t) regime.
    Vec start(2);
    start << 4.5, 4.5;
    p.initial = start;
    return p;
}

Problem make_three_spheres(const ThreeSpheresOptions& opts) {
    Vec c1(3), c2(3), c3(3);
    c1 << 1.0, 0.0, 0.0;
    c2 << -1.0, 0.0, 0.0;
    c3 << 0.0, 1.0, 0.0;
    Intersection inter;
    inter.pieces.emplace_back(BallPiece(c1, 2.0));
    inter.pieces.emplace_back(BallPiece(c2, 2.0));
    inter.pieces.emplace_back(BallPiece(c3, 2.0));
    inter.tol = opts.proj_tol;

    Vec g(3);
    switch (opts.objective) {
        case ThreeSpheresObjective::apex_sharp: {
            Vec ray(3);
            ray << 0.0, 1.0, -3.0 * std::sqrt(3.0);
            g = ray / ray.norm();
            break;
        }
        case ThreeSpheresObjective::minus_x1: g << -1.0, 0.0, 0.0; break;
        case ThreeSpheresObjective::minus_x3: g << 0.0, 0.0, -1.0; break;
    }

    Problem p;
    p.name = "three-spheres";
    p.dim = 3;
    p.objective = [g](const Vec& x) { return g.dot(x); };
    p.grad = [g](const Vec&) { return g; };
    double sigma = opts.grad_sigma;
    p.sample_grad = [g, sigma](const Vec&, RngStream& rng) { return Vec(g + rng.gaussian(3, sigma)); };
    p.value = ValueOracle{
        [sigma](RngStream& rng) {
            Vec w = rng.gaussian(3, sigma);
            return ValueOracle::Noise{w[0], w[1], w[2]};
        },
        [g](const Vec& x, const ValueOracle::Noise& w) {
            double noisy = g.dot(x);
            for (int i = 0; i < 3; ++i) noisy += w[static_cast<std::size_t>(i)] * x[i];
            return noisy;
        },
    };
    p.feasible = std::make_shared<IntersectionSet>(std::move(inter));

    Vec apex(3);
    apex << 0.0, 0.0, std::sqrt(3.0);
    if (opts.objective == ThreeSpheresObjective::minus_x1 && opts.numeric_optimum) {
        Vec xstar(3);
        xstar << 1.0, 0.0, 0.0;
        p.optimum = OptimumInfo::point(xstar);
        p.opt_value = -1.0;
    } else {
        p.optimum = OptimumInfo::point(apex);
        p.opt_value = g.dot(apex);
    }
    return p;
}

Problem make_nn_ridge() {
    Vec x_plus(2);
    x_plus << 1.0, -1.0;

    Intersection inter;
    inter.pieces.emplace_back(OrthantPiece(2));
    inter.pieces.emplace_back(BallPiece(Vec::Zero(2), std::sqrt(0.9)));

    Problem p;
    p.name = "nn-ridge";
    p.dim = 2;
    p.objective = [x_plus](const Vec& x) { return 0.5 * ((x - x_plus).squaredNorm() + 1.0); };
    p.grad = [x_plus](const Vec& x) { return Vec(x - x_plus); };
    p.sample_grad = [x_plus](const Vec& x, RngStream& rng) {
        Vec a = rng.gaussian(2);
        double b = a.dot(x_plus) + rng.normal();
        return Vec(a * (a.dot(x) - b));
    };
    p.value = ValueOracle{
        [](RngStream& rng) {
            return ValueOracle::Noise{rng.normal(), rng.normal(), rng.normal()};
        },
        [x_plus](const Vec& x, const ValueOracle::Noise& w) {
            Vec a(2);
            a << w[0], w[1];
            double b = a.dot(x_plus) + w[2];
            double r = a.dot(x) - b;
            return 0.5 * r * r;
        },
    };
    p.feasible = std::make_shared<IntersectionSet>(std::move(inter));
    Vec xstar(2);
    xstar << std::sqrt(0.9), 0.0;
    p.optimum = OptimumInfo::point(xstar);
    p.opt_value = 0.5 * ((xstar - x_plus).squaredNorm() + 1.0);
    return p;
}

namespace {

// Halfspace list of a convex polygon given counter-clockwise vertices.
std::vector<HalfspacePiece> polygon_halfspaces(const std::vector<Vec>& vertices) {
    std::vector<HalfspacePiece> pieces;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec e = vertices[(i + 1) % n] - vertices[i];
        Vec normal(2);
        normal << e[1], -e[0];  // outward for a CCW polygon
        normal /= normal.norm();
        pieces.emplace_back(normal, normal.dot(vertices[i]));
    }
    return pieces;
}

}  // namespace

Problem make_lp2(const Lp2Options& opts) {
    Vec c_bar(2);
    c_bar << 4.0, 6.0;

    // Reconstructed polytope. The two edges meeting at the optimum (2,1) have
    // outward normals 6 degrees either side of -c_bar, so sampled costs leave
    // the vertex normal cone often enough to sustain the alpha-scale noise
    // floor; a wide cone would absorb the iterate exactly (the rare-event
    // regime noted for large batches).
    std::vector<Vec> vertices;
    auto vertex = [&vertices](double x, double y) {
        Vec v(2);
        v << x, y;
        vertices.push_back(v);
    };
    vertex(2.0, 1.0);
    vertex(4.65642258455687, -0.394065655647605);
    vertex(4.08172681342418, 1.5215869147947);
    vertex(1.60712174039956, 3.4905990585515);
    vertex(-0.308530830042739, 2.9159032874188);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        if (c_bar.dot(vertices[i]) <= c_bar.dot(vertices[0]) + 1e-9) {
            throw std::logic_error("lp2: reconstructed polytope lost its unique minimizer");
        }
    }

    Intersection inter;
    for (auto& h : polygon_halfspaces(vertices)) inter.pieces.emplace_back(std::move(h));

    Problem p;
    p.name = "lp2";
    p.dim = 2;
    p.objective = [c_bar](const Vec& x) { return c_bar.dot(x); };
    p.grad = [c_bar](const Vec&) { return c_bar; };
    double sigma = opts.cost_sigma;
    p.sample_grad = [c_bar, sigma](const Vec&, RngStream& rng) {
        return Vec(c_bar + rng.gaussian(2, sigma));
    };
    p.value = ValueOracle{
        [sigma](RngStream& rng) {
            Vec w = rng.gaussian(2, sigma);
            return ValueOracle::Noise{w[0], w[1]};
        },
        [c_bar](const Vec& x, const ValueOracle::Noise& w) {
            return (c_bar[0] + w[0]) * x[0] + (c_bar[1] + w[1]) * x[1];
        },
    };
    p.feasible = std::make_shared<IntersectionSet>(std::move(inter), vertices);
    p.optimum = OptimumInfo::point(vertices[0]);
    p.opt_value = c_bar.dot(vertices[0]);  // 14
    p.initial = vertices[3];               // most expensive vertex
    return p;
}

namespace {

Problem simplex_lp_base(int n, const char* name) {
    if (n < 2) throw ConfigError("simplex LP: need at least two arms");
    Vec c_bar(n);
    for (int i = 0; i < n; ++i) c_bar[i] = static_cast<double>(i + 1);

    Problem p;
    p.name = name;
    p.dim = n;
    p.objective = [c_bar](const Vec& x) { return c_bar.dot(x); };
    p.grad = [c_bar](const Vec&) { return c_bar; };
    p.sample_grad = [c_bar, n](const Vec&, RngStream& rng) {
        return Vec(c_bar + rng.gaussian(n));
    };
    p.value = ValueOracle{
        [n](RngStream& rng) {
            Vec w = rng.gaussian(n);
            return ValueOracle::Noise(w.data(), w.data() + n);
        },
        [c_bar, n](const Vec& x, const ValueOracle::Noise& w) {
            double v = c_bar.dot(x);
            for (int i = 0; i < n; ++i) v += w[static_cast<std::size_t>(i)] * x[i];
            return v;
        },
    };
    p.feasible = std::make_shared<PieceSet>(SimplexPiece(n));
    Vec e1 = Vec::Zero(n);
    e1[0] = 1.0;
    p.optimum = OptimumInfo::point(e1);
    p.opt_value = c_bar[0];
    return p;
}

}  // namespace

Problem make_simplex_lp(int n) { return simplex_lp_base(n, "simplex50"); }

Problem make_mab(int n) {
    Problem p = simplex_lp_base(n, "mab50");
    p.arm_cost = [](int arm, RngStream& rng) { return rng.normal(static_cast<double>(arm + 1), 1.0); };
    return p;
}

Problem make_reflected_1d(const Reflected1dOptions& opts) {
    Problem p;
    p.name = opts.constrained ? "reflected1d" : "reflected1d-free";
    p.dim = 1;
    p.objective = [](const Vec& x) { return (x[0] + 1.0) * (x[0] + 1.0); };
    p.grad = [](const Vec& x) {
        Vec g(1);
        g[0] = 2.0 * (x[0] + 1.0);
        return g;
    };
    double sigma = opts.grad_sigma;
    p.sample_grad = [sigma](const Vec& x, RngStream& rng) {
        Vec g(1);
        g[0] = 2.0 * (x[0] + 1.0) + rng.normal(0.0, sigma);
        return g;
    };
    Vec lo(1), hi(1);
    lo << (opts.constrained ? 0.0 : -opts.x_max);
    hi << opts.x_max;
    p.feasible = std::make_shared<PieceSet>(BoxPiece(lo, hi));
    Vec xstar(1);
    xstar << (opts.constrained ? 0.0 : -1.0);
    p.optimum = OptimumInfo::point(xstar);
    p.opt_value = opts.constrained ? 1.0 : 0.0;
    if (opts.constrained) p.kappa = 2.0;  // 2(x+1) sign(x) >= 2 on (0, x_max]
    p.curvature_c = 0.0;                  // central differences are exact on quadratics
    return p;
}

Problem make_problem(const std::string& name, const std::map<std::string, double>& overrides) {
    auto get = [&overrides](const std::string& key, double fallback) {
        auto it = overrides.find(key);
        return it == overrides.end() ? fallback : it->second;
    };
    if (name == "circle") {
        CircleOptions o;
        o.grad_sigma = get("sigma", o.grad_sigma);
        o.value_sigma = get("value_sigma", o.value_sigma);
        return make_circle(o);
    }
    if (name == "three-spheres") {
        ThreeSpheresOptions o;
        int obj = static_cast<int>(get("objective", -1.0));  // -1 sharp, 0 -x1, 2 -x3
        if (obj == 0) o.objective = ThreeSpheresObjective::minus_x1;
        if (obj == 2) o.objective = ThreeSpheresObjective::minus_x3;
        o.numeric_optimum = get("numeric_optimum", 0.0) != 0.0;
        o.grad_sigma = get("sigma", o.grad_sigma);
        o.proj_tol = get("proj_tol", o.proj_tol);
        return make_three_spheres(o);
    }
    if (name == "nn-ridge") return make_nn_ridge();
    if (name == "lp2") {
        Lp2Options o;
        o.cost_sigma = get("cost_sigma", get("sigma", o.cost_sigma));
        return make_lp2(o);
    }
    if (name == "simplex50") return make_simplex_lp(static_cast<int>(get("n", 50)));
    if (name == "mab50") return make_mab(static_cast<int>(get("n", 50)));
    if (name == "mdp3") {
        MdpDualOptions o;
        o.cost_sigma = get("cost_sigma", o.cost_sigma);
        o.proj_tol = get("proj_tol", o.proj_tol);
        o.proj_max_sweeps = static_cast<int>(get("proj_max_sweeps", o.proj_max_sweeps));
        return make_mdp_dual(make_mdp_3state(), o);
    }
    if (name == "blackjack") {
        MdpDualOptions o;
        o.cost_sigma = get("cost_sigma", o.cost_sigma);
        o.proj_tol = get("proj_tol", 1e-8);  // 580-dim Dykstra; benchmark default
        return make_mdp_dual(make_blackjack(), o);
    }
    if (name == "reflected1d") {
        Reflected1dOptions o;
        o.constrained = get("constrained", 1.0) != 0.0;
        o.x_max = get("x_max", o.x_max);
        o.grad_sigma = get("sigma", o.grad_sigma);
        return make_reflected_1d(o);
    }
    throw ConfigError("unknown problem: " + name + " (see bench-list)");
}

std::vector<std::string> benchmark_names() {
    return {"circle", "three-spheres", "nn-ridge", "lp2", "simplex50", "mab50", "mdp3", "blackjack", "reflected1d"};
}

}  // namespace sharpsa
