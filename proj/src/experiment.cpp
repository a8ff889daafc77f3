#include "sharpsa/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sharpsa/errors.hpp"
#include "sharpsa/problems.hpp"

#ifndef SHARPSA_VERSION
#define SHARPSA_VERSION "0.1.0"
#endif

namespace sharpsa {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// 17 significant digits: doubles round-trip exactly.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string version_string() { return SHARPSA_VERSION; }

StepSchedule ExperimentConfig::build_schedule() const {
    if (schedule_kind == "power") return StepSchedule::power_law(a, u, gamma);
    if (schedule_kind == "staged") {
        if (stages.empty()) throw ConfigError("staged schedule: no [stages] table");
        return StepSchedule::staged(stages);
    }
    if (schedule_kind == "staged-b") return staged_schedule_b(b_a, b_smax);
    throw ConfigError("unknown schedule kind: " + schedule_kind);
}

RunConfig ExperimentConfig::build_run_config() const {
    RunConfig rc;
    rc.schedule = build_schedule();
    rc.iters = iters;
    rc.batch = batch;
    rc.nu = nu;
    rc.sfw_fixed_batch = sfw_batch;
    rc.sfw_sigma = sfw_sigma;
    rc.sfw_kappa = sfw_kappa;
    rc.record.dense_until = record_dense_until;
    return rc;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.out_dir = default_out_dir();
    std::istringstream in(text);
    std::string line;
    bool in_stages = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line == "[stages]") {
            in_stages = true;
            continue;
        }
        if (line.front() == '[') throw ConfigError("unknown section at line " + std::to_string(lineno));
        if (in_stages) {
            std::istringstream row(line);
            double rate;
            long length;
            if (!(row >> rate >> length)) {
                throw ConfigError("bad stage row at line " + std::to_string(lineno));
            }
            cfg.stages.push_back({rate, length});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "problem") {
                cfg.problem = value;
            } else if (key == "algorithm") {
                cfg.algorithm = value;
            } else if (key == "schedule") {
                cfg.schedule_kind = value;
            } else if (key == "a") {
                cfg.a = std::stod(value);
            } else if (key == "u") {
                cfg.u = std::stod(value);
            } else if (key == "gamma") {
                cfg.gamma = std::stod(value);
            } else if (key == "b_a") {
                cfg.b_a = std::stod(value);
            } else if (key == "b_smax") {
                cfg.b_smax = std::stoi(value);
            } else if (key == "iters") {
                cfg.iters = std::stol(value);
            } else if (key == "replications" || key == "reps") {
                cfg.reps = std::stoi(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "batch") {
                cfg.batch = std::stoi(value);
            } else if (key == "nu") {
                cfg.nu = std::stod(value);
            } else if (key == "sfw_batch") {
                cfg.sfw_batch = std::stol(value);
            } else if (key == "sfw_sigma") {
                cfg.sfw_sigma = std::stod(value);
            } else if (key == "sfw_kappa") {
                cfg.sfw_kappa = std::stod(value);
            } else if (key == "threads") {
                cfg.threads = std::stoi(value);
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "fit_t_min") {
                cfg.fit_t_min = std::stod(value);
            } else if (key == "fit_series") {
                cfg.fit_series = value;
            } else if (key == "record_dense_until") {
                cfg.record_dense_until = std::stol(value);
            } else if (key.rfind("problem.", 0) == 0) {
                cfg.overrides[key.substr(8)] = std::stod(value);
            } else {
                throw ConfigError("unknown key '" + key + "' at line " + std::to_string(lineno));
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for '" + key + "' at line " + std::to_string(lineno));
        }
    }
    if (cfg.fit_series != "dist" && cfg.fit_series != "gap") {
        throw ConfigError("fit_series must be 'dist' or 'gap'");
    }
    if (cfg.reps < 1) throw ConfigError("replications must be at least 1");
    if (cfg.iters < 1) throw ConfigError("iters must be at least 1");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string default_out_dir() {
    const char* env = std::getenv("SHARPSA_OUT_DIR");
    return env && *env ? env : ".";
}

namespace {

struct RepOutcome {
    Trajectory traj;
    std::string error;
    bool failed = false;
};

std::vector<RepOutcome> run_replications(const ExperimentConfig& cfg, const Problem& problem,
                                         const RunConfig& rc, std::vector<std::string>& warnings) {
    Algo algo = algo_from_name(cfg.algorithm);
    warnings = validate_config(problem, algo, rc);
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cfg.reps));
    parallel_reps(cfg.reps, cfg.threads, [&](int r) {
        auto& out = outcomes[static_cast<std::size_t>(r)];
        try {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
            out.traj = run(problem, algo, rc, rng);
        } catch (const std::exception& e) {
            out.failed = true;
            out.error = e.what();
        }
    });
    return outcomes;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << contents;
    if (!out) throw IoError("write failed: " + path);
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["problem"] = cfg.problem;
    j["algorithm"] = cfg.algorithm;
    j["schedule"] = cfg.schedule_kind;
    j["a"] = cfg.a;
    j["u"] = cfg.u;
    j["gamma"] = cfg.gamma;
    j["iters"] = cfg.iters;
    j["replications"] = cfg.reps;
    j["seed"] = cfg.seed;
    j["batch"] = cfg.batch;
    j["nu"] = cfg.nu;
    if (cfg.sfw_batch) j["sfw_batch"] = *cfg.sfw_batch;
    j["fit_t_min"] = cfg.fit_t_min;
    j["fit_series"] = cfg.fit_series;
    for (const auto& [k, v] : cfg.overrides) j["overrides"][k] = v;
    if (!cfg.stages.empty()) {
        auto arr = nlohmann::json::array();
        for (const auto& st : cfg.stages) arr.push_back({{"rate", st.rate}, {"length", st.length}});
        j["stages"] = arr;
    }
    return j;
}

nlohmann::json fit_json(const SlopeFit& f) {
    return {{"slope", f.slope},  {"intercept", f.intercept},       {"r2", f.r2},
            {"t_lo", f.t_lo},    {"t_hi", f.t_hi},                 {"n_points", f.n_points},
            {"dropped_nonpositive", f.dropped_nonpositive}};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    Problem problem = make_problem(cfg.problem, cfg.overrides);
    RunConfig rc = cfg.build_run_config();

    ExperimentResult result;
    result.reps = cfg.reps;
    std::vector<RepOutcome> outcomes = run_replications(cfg, problem, rc, result.warnings);

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);

    // Per-replication trajectories. Thinning is a pure function of t, so all
    // successful replications share one time grid.
    std::string traj_csv = "rep,t,alpha,gap,dist,nontrivial_proj\n";
    const std::vector<TrajPoint>* grid = nullptr;
    std::vector<const Trajectory*> ok;
    for (int r = 0; r < cfg.reps; ++r) {
        const auto& out = outcomes[static_cast<std::size_t>(r)];
        if (out.failed) {
            ++result.failures;
            continue;
        }
        ok.push_back(&out.traj);
        if (!grid) grid = &out.traj.points;
        for (const auto& pt : out.traj.points) {
            traj_csv += std::to_string(r);
            traj_csv += ',';
            traj_csv += std::to_string(pt.t);
            traj_csv += ',';
            traj_csv += fmt(pt.alpha);
            traj_csv += ',';
            traj_csv += fmt(pt.gap);
            traj_csv += ',';
            traj_csv += fmt(pt.dist);
            traj_csv += ',';
            traj_csv += pt.nontrivial_projection ? '1' : '0';
            traj_csv += '\n';
        }
    }
    if (ok.empty()) throw std::runtime_error("all replications failed");

    std::string agg_csv = "t,mean_dist,se_dist,mean_gap,se_gap\n";
    std::vector<std::pair<double, double>> dist_series, gap_series;
    const double n_ok = static_cast<double>(ok.size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double sd = 0.0, sdd = 0.0, sg = 0.0, sgg = 0.0;
        for (const auto* traj : ok) {
            const auto& pt = traj->points[i];
            sd += pt.dist;
            sdd += pt.dist * pt.dist;
            sg += pt.gap;
            sgg += pt.gap * pt.gap;
        }
        double mean_dist = sd / n_ok, mean_gap = sg / n_ok;
        double se_dist = n_ok > 1 ? std::sqrt(std::max(0.0, sdd / n_ok - mean_dist * mean_dist) / (n_ok - 1)) : 0.0;
        double se_gap = n_ok > 1 ? std::sqrt(std::max(0.0, sgg / n_ok - mean_gap * mean_gap) / (n_ok - 1)) : 0.0;
        long t = (*grid)[i].t;
        agg_csv += std::to_string(t);
        agg_csv += ',';
        agg_csv += fmt(mean_dist);
        agg_csv += ',';
        agg_csv += fmt(se_dist);
        agg_csv += ',';
        agg_csv += fmt(mean_gap);
        agg_csv += ',';
        agg_csv += fmt(se_gap);
        agg_csv += '\n';
        dist_series.emplace_back(static_cast<double>(t), mean_dist);
        gap_series.emplace_back(static_cast<double>(t), mean_gap);
    }

    try {
        result.fit_dist = fit_loglog(dist_series, cfg.fit_t_min);
    } catch (const InsufficientData&) {
    }
    try {
        result.fit_gap = fit_loglog(gap_series, cfg.fit_t_min);
    } catch (const InsufficientData&) {
    }

    result.trajectories_csv = cfg.out_dir + "/trajectories.csv";
    result.aggregate_csv = cfg.out_dir + "/aggregate.csv";
    result.report_json = cfg.out_dir + "/fit.json";
    write_file(result.trajectories_csv, traj_csv);
    write_file(result.aggregate_csv, agg_csv);

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    nlohmann::json report;
    report["version"] = version_string();
    report["config"] = config_echo(cfg);
    report["failures"] = result.failures;
    report["replications_ok"] = static_cast<int>(ok.size());
    if (result.fit_dist) report["fit_dist"] = fit_json(*result.fit_dist);
    if (result.fit_gap) report["fit_gap"] = fit_json(*result.fit_gap);
    report["headline_series"] = cfg.fit_series;
    if (!result.warnings.empty()) report["warnings"] = result.warnings;
    report["wall_seconds"] = result.wall_seconds;
    write_file(result.report_json, report.dump(2) + "\n");
    return result;
}

LinearConvergenceReport run_linear_convergence(const ExperimentConfig& cfg) {
    Problem problem = make_problem(cfg.problem, cfg.overrides);
    RunConfig rc = cfg.build_run_config();
    if (!rc.schedule.is_staged()) throw ConfigError("run_linear_convergence needs a staged schedule");
    rc.iters = rc.schedule.total_staged_iters();
    Algo algo = algo_from_name(cfg.algorithm);
    validate_config(problem, algo, rc);

    const std::size_t n_stages = rc.schedule.stages().size();
    std::vector<std::vector<double>> errors(static_cast<std::size_t>(cfg.reps));
    std::vector<int> failed(static_cast<std::size_t>(cfg.reps), 0);
    parallel_reps(cfg.reps, cfg.threads, [&](int r) {
        try {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
            StagedResult sr = run_staged(problem, algo, rc, rng);
            errors[static_cast<std::size_t>(r)] = sr.stage_errors;
        } catch (const std::exception&) {
            failed[static_cast<std::size_t>(r)] = 1;
        }
    });

    LinearConvergenceReport report;
    std::vector<const std::vector<double>*> ok;
    for (int r = 0; r < cfg.reps; ++r) {
        if (failed[static_cast<std::size_t>(r)]) {
            ++report.failures;
        } else {
            ok.push_back(&errors[static_cast<std::size_t>(r)]);
        }
    }
    if (ok.empty()) throw std::runtime_error("all replications failed");

    const double n_ok = static_cast<double>(ok.size());
    for (std::size_t s = 0; s < n_stages; ++s) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto* e : ok) {
            sum += (*e)[s];
            sumsq += (*e)[s] * (*e)[s];
        }
        double mean = sum / n_ok;
        report.mean_stage_errors.push_back(mean);
        report.se_stage_errors.push_back(
            n_ok > 1 ? std::sqrt(std::max(0.0, sumsq / n_ok - mean * mean) / (n_ok - 1)) : 0.0);
    }
    for (std::size_t s = 1; s < n_stages; ++s) {
        double ratio = report.mean_stage_errors[s] / report.mean_stage_errors[s - 1];
        report.mean_ratios.push_back(ratio);
        if (ratio > 0.75) report.flagged_stages.push_back(static_cast<int>(s));
    }
    // log2 mean error vs stage index, over stages with positive error
    {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        long m = 0;
        for (std::size_t s = 0; s < n_stages; ++s) {
            if (!(report.mean_stage_errors[s] > 0.0)) continue;
            double x = static_cast<double>(s);
            double y = std::log2(report.mean_stage_errors[s]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m >= 2) report.log2_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);
    std::string csv = "stage,mean_err,se_err,ratio\n";
    for (std::size_t s = 0; s < n_stages; ++s) {
        csv += std::to_string(s + 1);
        csv += ',';
        csv += fmt(report.mean_stage_errors[s]);
        csv += ',';
        csv += fmt(report.se_stage_errors[s]);
        csv += ',';
        csv += s == 0 ? "nan" : fmt(report.mean_ratios[s - 1]);
        csv += '\n';
    }
    write_file(cfg.out_dir + "/stages.csv", csv);

    nlohmann::json j;
    j["version"] = version_string();
    j["config"] = config_echo(cfg);
    j["mean_stage_errors"] = report.mean_stage_errors;
    j["mean_ratios"] = report.mean_ratios;
    j["flagged_stages"] = report.flagged_stages;
    j["log2_slope"] = report.log2_slope;
    j["failures"] = report.failures;
    report.report_json = cfg.out_dir + "/stages.json";
    write_file(report.report_json, j.dump(2) + "\n");
    return report;
}

}  // namespace sharpsa
