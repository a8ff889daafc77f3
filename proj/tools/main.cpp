#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "sharpsa/bounds.hpp"
#include "sharpsa/errors.hpp"
#include "sharpsa/experiment.hpp"
#include "sharpsa/problems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailRate = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<long> iters;
    std::optional<std::string> out;
    std::optional<int> threads;
};

void apply_flags(sharpsa::ExperimentConfig& cfg, const CommonFlags& flags) {
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.reps) cfg.reps = *flags.reps;
    if (flags.iters) cfg.iters = *flags.iters;
    if (flags.out) cfg.out_dir = *flags.out;
    if (flags.threads) cfg.threads = *flags.threads;
}

int cmd_run(const std::string& config_path, const CommonFlags& flags, bool staged_report) {
    sharpsa::ExperimentConfig cfg = sharpsa::parse_config_file(config_path);
    apply_flags(cfg, flags);
    if (staged_report) {
        auto report = sharpsa::run_linear_convergence(cfg);
        std::printf("stages: %zu  log2-slope: %.4f  flagged: %zu  report: %s\n",
                    report.mean_stage_errors.size(), report.log2_slope, report.flagged_stages.size(),
                    report.report_json.c_str());
        for (std::size_t s = 0; s < report.mean_ratios.size(); ++s) {
            std::printf("  stage %zu ratio %.4f\n", s + 2, report.mean_ratios[s]);
        }
        if (report.failures > 0.05 * cfg.reps) return kExitFailRate;
        return kExitOk;
    }
    auto result = sharpsa::run_experiment(cfg);
    for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    const auto& fit = result.headline(cfg.fit_series);
    if (fit) {
        std::printf("%s/%s: slope %.4f (R2 %.4f, %ld pts) on mean %s; outputs in %s\n",
                    cfg.problem.c_str(), cfg.algorithm.c_str(), fit->slope, fit->r2, fit->n_points,
                    cfg.fit_series.c_str(), cfg.out_dir.c_str());
    } else {
        std::printf("%s/%s: no slope fit (too few points); outputs in %s\n", cfg.problem.c_str(),
                    cfg.algorithm.c_str(), cfg.out_dir.c_str());
    }
    if (result.failures > 0.05 * result.reps) {
        std::fprintf(stderr, "error: %d of %d replications failed\n", result.failures, result.reps);
        return kExitFailRate;
    }
    return kExitOk;
}

void print_report(const sharpsa::ConditionReport& r) {
    std::printf("[%s] %s  estimate=%.6g  secondary=%.6g  se=%.3g  samples=%ld\n  %s\n",
                r.pass ? "PASS" : "FAIL", r.condition.c_str(), r.estimate, r.secondary, r.std_error,
                r.samples, r.note.c_str());
}

int cmd_check(const std::string& problem_name, const std::string& condition, std::uint64_t seed,
              const std::optional<std::string>& out_dir) {
    sharpsa::Problem p = sharpsa::make_problem(problem_name);
    sharpsa::RngStream rng(seed, 0);
    bool all = condition.empty();
    nlohmann::json out;
    out["problem"] = problem_name;
    out["seed"] = seed;

    auto record = [&out](const sharpsa::ConditionReport& r) {
        print_report(r);
        out["conditions"].push_back({{"condition", r.condition},
                                     {"estimate", r.estimate},
                                     {"secondary", r.secondary},
                                     {"std_error", r.std_error},
                                     {"samples", r.samples},
                                     {"pass", r.pass},
                                     {"note", r.note}});
    };

    if (all || condition == "d1") {
        record(sharpsa::check_sharpness(p, 2000, rng));
    }
    if (all || condition == "c1") {
        sharpsa::DriftCheckConfig cfg;
        cfg.alpha = 0.01;
        cfg.batch = 10;
        cfg.n_inner = 4000;
        auto sharp = sharpsa::check_sharpness(p, 500, rng);
        cfg.kappa = sharp.estimate / 2.0;
        record(sharpsa::check_drift(p, cfg, rng));
    }
    if (all || condition == "c2" || condition == "d2") {
        std::vector<double> norms;
        norms.reserve(100000);
        sharpsa::Vec x0 = p.initial_point();
        for (int i = 0; i < 100000; ++i) norms.push_back(p.sample_grad(x0, rng).norm());
        auto curve = sharpsa::empirical_mgf(norms, {0.125, 0.25, 0.5, 1.0, 2.0});
        std::printf("[INFO] C2 MGF of ||c_t|| at the initial point:\n");
        for (const auto& pt : curve) {
            std::printf("  lambda=%.3f  D=%.4g (se %.2g)  E=%.4g (se %.2g)%s\n", pt.lambda, pt.D_hat,
                        pt.D_se, pt.E_hat, pt.E_se, pt.max_dominated ? "  [max-dominated]" : "");
            out["mgf"].push_back({{"lambda", pt.lambda},
                                  {"D", pt.D_hat},
                                  {"D_se", pt.D_se},
                                  {"E", pt.E_hat},
                                  {"E_se", pt.E_se},
                                  {"max_dominated", pt.max_dominated}});
        }
    }
    if (all || condition == "d3") {
        if (!p.grad) throw sharpsa::NoGradient();
        sharpsa::Vec x = p.initial_point();
        if (p.optimum.known() && p.optimum.distance(x) < 0.5) {
            x = sharpsa::sample_feasible(*p.feasible, rng);
        }
        auto profile = sharpsa::kw_bias_profile(p, x, {0.05, 0.1, 0.2, 0.4});
        std::printf("[INFO] D3 central-difference bias: loglog slope %.3f, c-hat %.4g\n",
                    profile.loglog_slope, profile.c_hat);
        for (std::size_t i = 0; i < profile.nus.size(); ++i) {
            std::printf("  nu=%.3f  bias=%.6g\n", profile.nus[i], profile.biases[i]);
        }
        out["d3"] = {{"loglog_slope", profile.loglog_slope}, {"c_hat", profile.c_hat}};
    }
    if (all || condition == "e2") {
        double margin = sharpsa::interior_margin(p, 200, rng);
        std::printf("[INFO] E2 interior margin (optimum to boundary): %.6g\n", margin);
        out["e2_interior_margin"] = margin;
    }
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::ofstream f(*out_dir + "/conditions.json", std::ios::binary);
        if (!f) throw sharpsa::IoError("cannot write " + *out_dir + "/conditions.json");
        f << out.dump(2) << "\n";
        std::printf("report: %s/conditions.json\n", out_dir->c_str());
    }
    return kExitOk;
}

int cmd_constants(double kappa, double lambda, double B, double F, double D, double E, double gamma,
                  double a, double u, const std::optional<std::string>& out_dir) {
    auto bc = sharpsa::bound_constants(kappa, lambda, B, F, D, E, gamma, a, u);
    std::printf("G  = %.12g\nn  = %ld\nQ  = %.12g\nJ  = %.12g\nH  = %.12g\nI  = %.12g\n"
                "K  = %.12g\nR  = %.12g\nT0 = %ld\nT1 = %ld\nT2 = %ld\n",
                bc.G, bc.n, bc.Q, bc.J, bc.H, bc.I, bc.K, bc.R, bc.T0, bc.T1, bc.T2);
    if (out_dir) {
        nlohmann::json j = {{"kappa", bc.kappa}, {"lambda", bc.lambda}, {"B", bc.B}, {"F", bc.F},
                            {"D", bc.D},         {"E", bc.E},           {"gamma", bc.gamma},
                            {"a", bc.a},         {"u", bc.u},           {"G", bc.G},
                            {"n", bc.n},         {"Q", bc.Q},           {"H", bc.H},
                            {"I", bc.I},         {"J", bc.J},           {"K", bc.K},
                            {"R", bc.R},         {"T0", bc.T0},         {"T1", bc.T1},
                            {"T2", bc.T2}};
        std::filesystem::create_directories(*out_dir);
        std::ofstream f(*out_dir + "/constants.json", std::ios::binary);
        if (!f) throw sharpsa::IoError("cannot write " + *out_dir + "/constants.json");
        f << j.dump(2) << "\n";
        std::printf("report: %s/constants.json\n", out_dir->c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic approximation under sharp objectives: experiments and condition checks"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path, problem_name, condition;
    bool staged_report = false;

    auto* run = app.add_subcommand("run", "Run a seeded experiment from a config file");
    run->add_option("config", config_path, "config file path")->required();
    run->add_flag("--staged-report", staged_report, "emit the per-stage linear-convergence report");
    run->add_option("--seed", flags.seed, "master seed override");
    run->add_option("--reps", flags.reps, "replication count override");
    run->add_option("--iters", flags.iters, "iteration count override");
    run->add_option("--out", flags.out, "output directory override");
    run->add_option("--threads", flags.threads, "worker thread count");

    auto* check = app.add_subcommand("check", "Verify drift/noise/sharpness conditions on a benchmark");
    check->add_option("problem", problem_name, "benchmark name")->required();
    check->add_option("--condition", condition, "one of d1|c1|c2|d3|e2 (default: all)");
    std::uint64_t check_seed = 1;
    check->add_option("--seed", check_seed, "seed");
    std::optional<std::string> check_out;
    check->add_option("--out", check_out, "also write conditions.json here");

    double kappa = 1.0, lambda = 1.0, B = 1.0, F = 1.0, D = 2.0, E = 1.0, gamma = 1.0, a = 1.0,
           u = 1.0;
    auto* constants = app.add_subcommand("constants", "Evaluate the tail-bound constant table");
    constants->add_option("--kappa", kappa)->required();
    constants->add_option("--lambda", lambda)->required();
    constants->add_option("--B", B)->required();
    constants->add_option("--F", F)->required();
    constants->add_option("--D", D)->required();
    constants->add_option("--E", E)->required();
    constants->add_option("--gamma", gamma)->required();
    constants->add_option("--a", a)->required();
    constants->add_option("--u", u)->required();
    std::optional<std::string> constants_out;
    constants->add_option("--out", constants_out, "also write constants.json here");

    auto* bench = app.add_subcommand("bench-list", "List benchmark problem names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, flags, staged_report);
        if (check->parsed()) return cmd_check(problem_name, condition, check_seed, check_out);
        if (constants->parsed()) {
            return cmd_constants(kappa, lambda, B, F, D, E, gamma, a, u, constants_out);
        }
        if (bench->parsed()) {
            for (const auto& name : sharpsa::benchmark_names()) std::printf("%s\n", name.c_str());
            return kExitOk;
        }
    } catch (const sharpsa::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const sharpsa::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
