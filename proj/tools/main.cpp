#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

using namespace sabcp_cli;

namespace {

template <class T>
void take(CLI::Option* opt, const T& value, std::optional<T>& dst) {
    if (opt->count() > 0) dst = value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online conformal prediction intervals for return series: benchmark harness"};
    app.set_version_flag("--version", std::string(sabcp_version()));
    app.set_config("--config", "", "flat key=value file mirroring the flags; flags given on the command line win");
    app.require_subcommand(1);

    RawOptions raw;
    double beta = 0.0, r_max = 0.0;
    std::string score_mode, out, high_vol;
    std::size_t state_dim = 0, warmup = 0, min_rows = 0, history_cap = 0;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    std::size_t raw_steps = 0, raw_slen = 0;

    app.add_option("--data", raw.data, "dataset as ASSET=prices.csv or NAME=synthetic (repeatable)");
    app.add_option("--model", raw.models, "models: sabcp,bcp,aci,agaci,dtaci")->delimiter(',');
    app.add_option("--alpha", raw.alphas, "target miscoverage levels (default 0.1,0.2,0.3)")->delimiter(',');
    app.add_option("--k", raw.k, "target matching number K, global or ASSET=value (default 1)")->delimiter(',');
    auto* o_beta = app.add_option("--beta", beta, "temporal discount (default 0.99)");
    auto* o_rmax = app.add_option("--r-max", r_max, "prior score bound R (default 10x warmup score sd)");
    auto* o_mode = app.add_option("--score-mode", score_mode, "scaled or absolute (default scaled)");
    auto* o_dim = app.add_option("--state-dim", state_dim, "lagged returns in the state vector (default 5)");
    auto* o_cap = app.add_option("--history-cap", history_cap, "keep at most this many past scores");
    auto* o_seed = app.add_option("--seed", seed, "seed for synthetic datasets (default 0)");
    auto* o_out = app.add_option("--out", out, "output directory (default out)");
    auto* o_jobs = app.add_option("--jobs", jobs, "cells run in parallel, 0 = all cores (default 1)");
    auto* o_warm = app.add_option("--warmup", warmup, "GARCH warmup returns (default 250)");
    auto* o_rows = app.add_option("--min-rows", min_rows, "minimum usable price rows (default 300)");
    auto* o_hv = app.add_option("--high-vol", high_vol, "high-volatility rule: hindsight or expanding");
    auto* o_steps = app.add_option("--synth-steps", raw_steps, "synthetic stream length (default 900)");
    app.add_option("--shock-starts", raw.shock_starts, "synthetic shock start steps (default 200,450,700)")
        ->delimiter(',');
    auto* o_slen = app.add_option("--shock-len", raw_slen, "synthetic shock length (default 30)");
    app.add_option("--k-grid", raw.k_grid, "sweep-k grid (default 0.01,0.1,1,10,100,1000)")->delimiter(',');
    app.add_option("--r-grid", raw.r_grid, "sweep-k: also vary R over these values")->delimiter(',');

    app.add_subcommand("run", "evaluate every (dataset, model, alpha) cell")->fallthrough();
    auto* sweep = app.add_subcommand("sweep-k", "sweep K for sabcp and tabulate Winkler per K")->fallthrough();
    auto* synth = app.add_subcommand("synth", "generate the regime-shock stream and run models on it")->fallthrough();
    auto* report = app.add_subcommand("report", "render a table from a finished output directory")->fallthrough();
    std::string report_path;
    report->add_option("dir", report_path, "output directory of a finished run (default --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    take(o_beta, beta, raw.beta);
    take(o_rmax, r_max, raw.r_max);
    take(o_mode, score_mode, raw.score_mode);
    take(o_dim, state_dim, raw.state_dim);
    take(o_cap, history_cap, raw.history_cap);
    take(o_seed, seed, raw.seed);
    take(o_out, out, raw.out);
    take(o_jobs, jobs, raw.jobs);
    take(o_warm, warmup, raw.warmup);
    take(o_rows, min_rows, raw.min_rows);
    take(o_hv, high_vol, raw.high_vol);
    take(o_steps, raw_steps, raw.synth_steps);
    take(o_slen, raw_slen, raw.shock_len);

    try {
        if (*report) {
            if (report_path.empty()) report_path = raw.out.value_or("out");
            return report_dir(report_path);
        }
        const Mode mode = *sweep ? Mode::sweep : *synth ? Mode::synth : Mode::run;
        const Plan plan = build_plan(raw, mode);
        switch (mode) {
            case Mode::sweep: return sweep_plan(plan);
            case Mode::synth: return synth_plan(plan);
            case Mode::run: return run_plan(plan);
        }
    } catch (const PlanError& e) {
        std::cerr << "invalid plan: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_partial;
    }
    return exit_ok;
}
