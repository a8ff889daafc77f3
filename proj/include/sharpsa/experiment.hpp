#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sharpsa/algorithms.hpp"
#include "sharpsa/fit.hpp"
#include "sharpsa/schedule.hpp"

namespace sharpsa {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
    std::string problem = "circle";
    std::map<std::string, double> overrides;  // problem.* keys from the config file

    std::string algorithm = "psgd";
    std::string schedule_kind = "power";  // power | staged | staged-b
    double a = 1.0, u = 1.0, gamma = 1.0;
    std::vector<StepSchedule::Stage> stages;
    double b_a = 1.0;  // staged-b parameters
    int b_smax = 8;

    long iters = 10000;
    int reps = 20;
    std::uint64_t seed = 1;
    int batch = 1;
    double nu = 1.0;
    std::optional<long> sfw_batch;
    double sfw_sigma = 1.0, sfw_kappa = 1.0;

    int threads = 0;  // 0: hardware concurrency
    std::string out_dir;
    double fit_t_min = 100.0;
    std::string fit_series = "dist";  // headline series: dist | gap
    long record_dense_until = 1000;

    StepSchedule build_schedule() const;
    RunConfig build_run_config() const;
};

/// Flat key = value file with an optional [stages] table of "rate length"
/// rows; '#' starts a comment. problem.* keys become numeric overrides.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Default output directory: SHARPSA_OUT_DIR when set, else the current directory.
std::string default_out_dir();

struct ExperimentResult {
    std::optional<SlopeFit> fit_dist, fit_gap;
    int failures = 0;
    int reps = 0;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
    std::string trajectories_csv, aggregate_csv, report_json;

    const std::optional<SlopeFit>& headline(const std::string& series) const {
        return series == "gap" ? fit_gap : fit_dist;
    }
};

/// Runs seeded replications in parallel, writes trajectories.csv,
/// aggregate.csv and a fit report; byte-identical outputs for a fixed config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct LinearConvergenceReport {
    std::vector<double> mean_stage_errors;
    std::vector<double> se_stage_errors;
    std::vector<double> mean_ratios;
    std::vector<int> flagged_stages;  // mean ratio above 0.75
    double log2_slope = 0.0;          // OLS slope of log2 mean error vs stage
    int failures = 0;
    std::string report_json;
};

/// Staged-schedule experiment: per-stage end errors, halving ratios and the
/// log2-error-versus-stage slope.
LinearConvergenceReport run_linear_convergence(const ExperimentConfig& cfg);

std::string version_string();

}  // namespace sharpsa
