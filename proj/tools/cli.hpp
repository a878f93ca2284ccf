#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sabcp/sabcp.h"

namespace sabcp_cli {

enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_invalid = 2 };

// Raised for anything wrong with the plan itself (bad flag values, unknown
// models, unusable output directory); maps to exit code 2.
class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::string asset;
    std::string source;
    bool synthetic = false;
};

// Flag values as the user wrote them, before validation.
struct RawOptions {
    std::vector<std::string> data;
    std::vector<std::string> models;
    std::vector<double> alphas;
    std::vector<std::string> k;
    std::vector<double> k_grid;
    std::vector<double> r_grid;
    std::optional<double> beta;
    std::optional<double> r_max;
    std::optional<std::string> score_mode;
    std::optional<std::size_t> state_dim;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> jobs;
    std::optional<std::size_t> warmup;
    std::optional<std::size_t> min_rows;
    std::optional<std::string> high_vol;
    std::optional<std::size_t> history_cap;
    std::optional<std::size_t> synth_steps;
    std::vector<std::size_t> shock_starts;
    std::optional<std::size_t> shock_len;
};

struct Plan {
    std::vector<Dataset> datasets;
    std::vector<sabcp_method> methods;
    std::vector<double> alphas;
    double k = 1.0;
    std::map<std::string, double> k_overrides;
    std::vector<double> k_grid;
    std::vector<double> r_grid;
    double beta = 0.99;
    std::optional<double> r_max;
    sabcp_score_mode score_mode = SABCP_SCORE_SCALED;
    std::size_t state_dim = 5;
    std::size_t history_cap = 0;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    unsigned jobs = 1;
    std::size_t warmup = 250;
    std::size_t min_rows = 300;
    sabcp_high_vol_rule high_vol = SABCP_HIGH_VOL_HINDSIGHT;
    std::size_t synth_steps = 900;
    std::vector<std::size_t> shock_starts{200, 450, 700};
    std::size_t shock_len = 30;

    double k_for(const std::string& asset) const;
};

enum class Mode { run, sweep, synth };

Plan build_plan(const RawOptions& raw, Mode mode);

std::string fmt(double v);
std::string fmt_alpha(double alpha);
std::string cell_id(const std::string& asset, sabcp_method m, double alpha);

int run_plan(const Plan& plan);
int sweep_plan(const Plan& plan);
int synth_plan(const Plan& plan);

struct ReportRow {
    std::string asset;
    double target = 0.0;
    std::string model;
    double marginal = 0.0;
    std::optional<double> high_vol;
    double width = 0.0;
    double winkler = 0.0;
};

struct ReportResult {
    std::vector<ReportRow> rows;
    std::vector<std::string> problems;
};

std::string render_table(const std::vector<ReportRow>& rows);
ReportResult collect_report(const std::filesystem::path& dir);
int report_dir(const std::filesystem::path& dir);

}  // namespace sabcp_cli
