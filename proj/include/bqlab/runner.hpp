#pragma once

// Experiment configuration, dispatch and CSV reports.
//
// CSV schema (one header line, then one row per experiment point):
//   kind,param_json,value,slope,predicted_slope,pass,seconds
// param_json is a JSON object with sorted keys; empty numeric cells mean
// "not applicable"; pass is true/false; seconds is empty unless timing is
// requested, so that reports of identical runs are byte-identical.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bq {

enum class ExperimentKind { Solve, BilinearSweep, IllposedSweep, EstimateAudit, LinearDemo };

std::string to_string(ExperimentKind k);
/// Throws std::invalid_argument for an unknown name.
ExperimentKind parse_kind(const std::string& name);
std::vector<std::string> kind_names();

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Solve;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int workers = 1;
    bool plots = false;
    bool record_seconds = false;

    // model exponents
    double s = 0.0;
    double a = 0.45;
    double b = 0.55;

    // frequency grid and initial data
    double half_width = 20.0;
    int modes = 161;
    std::string data = "gaussian"; // gaussian | zero | random
    double amplitude = 1e-2;

    // solve
    double T = 0.5;
    int n_times = 32;
    int max_iterations = 60;
    double tolerance = 1e-13;
    int reference_steps = 2000; // 0 disables the RK4 comparison

    // linear-demo
    double t_max = 10.0;
    int samples = 101;

    // sweeps
    std::vector<double> ladder = {16, 32, 64, 128};
    double eps = 0.1;
    int n_alpha = 64;
    int n_beta = 8;
    double long_cells_per_N = 1.0;
    int short_cells = 64;
    int outer_nodes = 32;
    int inner_nodes = 32;

    // estimate-audit
    double range_min = 100.0;
    double range_max = 1e4;
    int samples_per_level = 96;
    bool regions = true;
};

/// Kind-specific admissibility checks; empty iff the config may run.
std::vector<std::string> validate(const ExperimentConfig& config);

struct ReportRow {
    ReportRow() = default;
    ReportRow(std::string k, nlohmann::json p) : kind(std::move(k)), params(std::move(p)) {}

    std::string kind;
    nlohmann::json params = nlohmann::json::object();
    std::optional<double> value;
    std::optional<double> slope;
    std::optional<double> predicted_slope;
    bool pass = true;
    std::optional<double> seconds;
};

struct RunResult {
    std::vector<ReportRow> rows;
    std::vector<std::string> files; // written report and plot paths
    bool all_pass = true;
};

/// Validates, runs, and writes <out_dir>/<kind>.csv (and .svg plots when
/// enabled). Throws std::invalid_argument listing the diagnostics for an
/// inadmissible config and std::runtime_error, prefixed with the experiment
/// context, for numerical failures.
RunResult run(const ExperimentConfig& config);

/// The CSV document for a list of rows.
std::string format_csv(const std::vector<ReportRow>& rows);

/// Calls fn(i) for i in [0, n) on `workers` threads; results are indexed, so
/// the outcome does not depend on scheduling. The first exception by index
/// is rethrown after all workers finish.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Full command-line entry point: `bqlab <kind> --config <path> [options]`.
/// Returns 0 iff every pass flag is true, 1 if some check failed, 2 on
/// usage, configuration or numerical errors.
int cli_main(int argc, const char* const* argv);

} // namespace bq
