#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace sabcp_cli {

namespace {

struct SeriesDeleter {
    void operator()(sabcp_series* s) const { sabcp_series_destroy(s); }
};
struct SynthDeleter {
    void operator()(sabcp_synth* s) const { sabcp_synth_destroy(s); }
};
struct RunDeleter {
    void operator()(sabcp_run* r) const { sabcp_run_destroy(r); }
};
using RunPtr = std::unique_ptr<sabcp_run, RunDeleter>;

struct Loaded {
    const Dataset* dataset = nullptr;
    std::unique_ptr<sabcp_series, SeriesDeleter> series;
    std::unique_ptr<sabcp_synth, SynthDeleter> synth;
    std::string error;
};

struct CellSpec {
    std::size_t data = 0;
    sabcp_method method = SABCP_METHOD_SABCP;
    double alpha = 0.1;
    double k = 1.0;
    std::optional<double> r_max;
    std::string id;
};

struct CellOutcome {
    bool ok = false;
    std::string error;
    sabcp_summary summary{};
};

std::string failure(sabcp_status st) {
    std::string msg = sabcp_last_error();
    return msg.empty() ? sabcp_status_string(st) : msg;
}

std::vector<Loaded> load_all(const Plan& plan) {
    std::vector<Loaded> out(plan.datasets.size());
    for (std::size_t i = 0; i < plan.datasets.size(); ++i) {
        const Dataset& d = plan.datasets[i];
        out[i].dataset = &d;
        if (d.synthetic) {
            sabcp_synth_spec spec;
            sabcp_synth_spec_init(&spec);
            spec.seed = plan.seed;
            spec.total_steps = plan.synth_steps;
            spec.shock_starts = plan.shock_starts.data();
            spec.n_shocks = plan.shock_starts.size();
            spec.shock_len = plan.shock_len;
            sabcp_synth* s = nullptr;
            const sabcp_status st = sabcp_synth_generate(&spec, &s);
            if (st != SABCP_OK) out[i].error = failure(st);
            out[i].synth.reset(s);
        } else {
            sabcp_series* s = nullptr;
            const sabcp_status st = sabcp_series_load(d.source.c_str(), d.asset.c_str(), plan.min_rows, &s);
            if (st != SABCP_OK) out[i].error = failure(st);
            out[i].series.reset(s);
        }
    }
    return out;
}

sabcp_config make_config(const Plan& plan, const CellSpec& cell, bool synthetic) {
    sabcp_config cfg;
    sabcp_config_init(&cfg);
    cfg.alpha = cell.alpha;
    cfg.beta = plan.beta;
    cfg.k = cell.k;
    if (cell.r_max) cfg.r_max = *cell.r_max;
    cfg.state_dim = synthetic ? 1 : plan.state_dim;
    cfg.history_cap = plan.history_cap;
    cfg.score_mode = plan.score_mode;
    return cfg;
}

sabcp_status execute(const Plan& plan, const Loaded& data, const CellSpec& cell, RunPtr& out) {
    const bool synthetic = data.dataset->synthetic;
    const sabcp_config cfg = make_config(plan, cell, synthetic);
    sabcp_run_options opts;
    sabcp_run_options_init(&opts);
    opts.warmup = plan.warmup;
    opts.auto_r_max = cell.r_max ? 0 : 1;
    opts.high_vol = plan.high_vol;
    sabcp_run* run = nullptr;
    const sabcp_status st = synthetic ? sabcp_run_synthetic(data.synth.get(), cell.method, &cfg, &opts, &run)
                                      : sabcp_run_returns(data.series.get(), cell.method, &cfg, &opts, &run);
    out.reset(run);
    return st;
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    f.close();
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string steps_csv(const Loaded& data, const sabcp_run* run) {
    const bool synthetic = data.dataset->synthetic;
    std::ostringstream os;
    os << "t," << (synthetic ? "shock" : "date")
       << ",y,center,lower,upper,covered,width,winkler,q_hat,pi_s,d_s,lambda_t,high_vol\n";
    const std::size_t n = sabcp_run_length(run);
    for (std::size_t i = 0; i < n; ++i) {
        sabcp_step_record r;
        if (sabcp_run_record(run, i, &r) != SABCP_OK) throw std::runtime_error(sabcp_last_error());
        os << r.t << ',';
        if (synthetic) os << sabcp_synth_is_shock(data.synth.get(), static_cast<std::size_t>(r.t));
        else os << sabcp_series_return_date(data.series.get(), static_cast<std::size_t>(r.t));
        os << ',' << fmt(r.y) << ',' << fmt(r.center) << ',' << fmt(r.lower) << ',' << fmt(r.upper) << ','
           << r.covered << ',' << fmt(r.width) << ',' << fmt(r.winkler) << ',' << fmt(r.q_hat) << ','
           << fmt(r.pi_s) << ',' << fmt(r.d_s) << ',' << fmt(r.lambda_t) << ',' << r.high_vol << '\n';
    }
    return os.str();
}

const char* kSummaryHeader =
    "asset,target,model,alpha,k,beta,r_max,score_mode,marginal,high_vol,width,winkler,n_steps,n_high_vol\n";

std::string summary_row(const Plan& plan, const Dataset& d, const CellSpec& cell, const sabcp_summary& s) {
    const bool uses_k = cell.method == SABCP_METHOD_SABCP;
    const bool uses_beta = uses_k || cell.method == SABCP_METHOD_BCP;
    std::ostringstream os;
    os << d.asset << ',' << fmt(1.0 - cell.alpha) << ',' << sabcp_method_name(cell.method) << ','
       << fmt(cell.alpha) << ',' << (uses_k ? fmt(cell.k) : "NA") << ','
       << (uses_beta ? fmt(plan.beta) : "NA") << ',' << fmt(s.r_max) << ','
       << (plan.score_mode == SABCP_SCORE_SCALED ? "scaled" : "absolute") << ',' << fmt(s.marginal_coverage)
       << ',' << (s.has_high_vol ? fmt(s.high_vol_coverage) : "NA") << ',' << fmt(s.avg_width) << ','
       << fmt(s.avg_winkler) << ',' << s.n_steps << ',' << s.n_high_vol << '\n';
    return os.str();
}

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw PlanError("cannot create output directory " + dir.string());
}

std::string status_csv(const std::vector<CellSpec>& cells, const std::vector<CellOutcome>& outcomes) {
    std::ostringstream os;
    os << "cell,status,message\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string msg = outcomes[i].error;
        for (char& c : msg) {
            if (c == ',' || c == '\n' || c == '\r') c = ' ';
        }
        os << cells[i].id << ',' << (outcomes[i].ok ? "ok" : "failed") << ',' << msg << '\n';
    }
    return os.str();
}

int finish(const std::vector<CellSpec>& cells, const std::vector<CellOutcome>& outcomes) {
    std::size_t failed = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (outcomes[i].ok) continue;
        ++failed;
        std::cerr << "cell " << cells[i].id << " failed: " << outcomes[i].error << '\n';
    }
    if (failed) {
        std::cerr << failed << " of " << cells.size() << " cells failed\n";
        return exit_partial;
    }
    return exit_ok;
}

}  // namespace

int run_plan(const Plan& plan) {
    prepare_dir(plan.out / "cells");
    const auto data = load_all(plan);

    std::vector<CellSpec> cells;
    for (std::size_t d = 0; d < plan.datasets.size(); ++d) {
        for (double a : plan.alphas) {
            for (sabcp_method m : plan.methods) {
                CellSpec c;
                c.data = d;
                c.method = m;
                c.alpha = a;
                c.k = plan.k_for(plan.datasets[d].asset);
                c.r_max = plan.r_max;
                c.id = cell_id(plan.datasets[d].asset, m, a);
                cells.push_back(std::move(c));
            }
        }
    }

    std::vector<CellOutcome> outcomes(cells.size());
    parallel_for(cells.size(), plan.jobs, [&](std::size_t i) {
        const CellSpec& cell = cells[i];
        const Loaded& d = data[cell.data];
        CellOutcome& res = outcomes[i];
        if (!d.error.empty()) {
            res.error = d.error;
            return;
        }
        try {
            RunPtr run;
            const sabcp_status st = execute(plan, d, cell, run);
            if (st != SABCP_OK) {
                res.error = failure(st);
                return;
            }
            sabcp_run_summary(run.get(), &res.summary);
            write_file(plan.out / "cells" / (cell.id + ".steps.csv"), steps_csv(d, run.get()));
            write_file(plan.out / "cells" / (cell.id + ".summary.csv"),
                       std::string(kSummaryHeader) + summary_row(plan, *d.dataset, cell, res.summary));
            res.ok = true;
        } catch (const std::exception& e) {
            res.error = e.what();
        }
    });

    std::string summary = kSummaryHeader;
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!outcomes[i].ok) continue;
        const auto& s = outcomes[i].summary;
        const Dataset& d = *data[cells[i].data].dataset;
        summary += summary_row(plan, d, cells[i], s);
        ReportRow r;
        r.asset = d.asset;
        r.target = 1.0 - cells[i].alpha;
        r.model = sabcp_method_name(cells[i].method);
        r.marginal = s.marginal_coverage;
        if (s.has_high_vol) r.high_vol = s.high_vol_coverage;
        r.width = s.avg_width;
        r.winkler = s.avg_winkler;
        rows.push_back(std::move(r));
    }
    write_file(plan.out / "summary.csv", summary);
    write_file(plan.out / "summary.txt", render_table(rows));
    write_file(plan.out / "status.csv", status_csv(cells, outcomes));
    return finish(cells, outcomes);
}

int synth_plan(const Plan& plan) {
    prepare_dir(plan.out);
    const auto data = load_all(plan);
    for (const auto& d : data) {
        if (!d.error.empty()) {
            std::cerr << d.dataset->asset << ": " << d.error << '\n';
            continue;
        }
        std::ostringstream os;
        os << "t,x,y,shock\n";
        const std::size_t n = sabcp_synth_length(d.synth.get());
        const double* x = sabcp_synth_x(d.synth.get());
        const double* y = sabcp_synth_y(d.synth.get());
        for (std::size_t t = 0; t < n; ++t) {
            os << t << ',' << fmt(x[t]) << ',' << fmt(y[t]) << ',' << sabcp_synth_is_shock(d.synth.get(), t) << '\n';
        }
        write_file(plan.out / (d.dataset->asset + ".stream.csv"), os.str());
    }
    return run_plan(plan);
}

int sweep_plan(const Plan& plan) {
    prepare_dir(plan.out);
    const auto data = load_all(plan);

    std::vector<std::optional<double>> r_values;
    if (plan.r_grid.empty()) r_values.push_back(plan.r_max);
    for (double r : plan.r_grid) r_values.emplace_back(r);

    std::vector<CellSpec> cells;
    for (std::size_t d = 0; d < plan.datasets.size(); ++d) {
        for (double a : plan.alphas) {
            for (const auto& r : r_values) {
                for (double k : plan.k_grid) {
                    CellSpec c;
                    c.data = d;
                    c.method = SABCP_METHOD_SABCP;
                    c.alpha = a;
                    c.k = k;
                    c.r_max = r;
                    c.id = cell_id(plan.datasets[d].asset, c.method, a) + "__k" + fmt(k) +
                           (r ? "__r" + fmt(*r) : std::string());
                    cells.push_back(std::move(c));
                }
            }
        }
    }

    std::vector<CellOutcome> outcomes(cells.size());
    parallel_for(cells.size(), plan.jobs, [&](std::size_t i) {
        const Loaded& d = data[cells[i].data];
        CellOutcome& res = outcomes[i];
        if (!d.error.empty()) {
            res.error = d.error;
            return;
        }
        RunPtr run;
        const sabcp_status st = execute(plan, d, cells[i], run);
        if (st != SABCP_OK) {
            res.error = failure(st);
            return;
        }
        sabcp_run_summary(run.get(), &res.summary);
        res.ok = true;
    });

    std::ostringstream csv;
    std::ostringstream txt;
    csv << "asset,target,alpha,k,r_max,marginal,high_vol,width,winkler,n_steps\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-7s %-12s %-12s %-9s %-9s %-10s %-10s\n", "Asset", "Target", "K",
                  "R", "Marginal", "High-Vol", "Width", "Winkler");
    txt << line;
    std::size_t i = 0;
    while (i < cells.size()) {
        // one block per (asset, alpha, R): all K values for that combination
        const std::size_t end = i + plan.k_grid.size();
        std::optional<std::size_t> best;
        for (std::size_t j = i; j < end; ++j) {
            const CellSpec& c = cells[j];
            if (!outcomes[j].ok) continue;
            const auto& s = outcomes[j].summary;
            const std::string& asset = plan.datasets[c.data].asset;
            csv << asset << ',' << fmt(1.0 - c.alpha) << ',' << fmt(c.alpha) << ',' << fmt(c.k) << ','
                << fmt(s.r_max) << ',' << fmt(s.marginal_coverage) << ','
                << (s.has_high_vol ? fmt(s.high_vol_coverage) : "NA") << ',' << fmt(s.avg_width) << ','
                << fmt(s.avg_winkler) << ',' << s.n_steps << '\n';
            char hv[32] = "NA";
            if (s.has_high_vol) std::snprintf(hv, sizeof hv, "%.4f", s.high_vol_coverage);
            std::snprintf(line, sizeof line, "%-12s %-7.2f %-12s %-12.6g %-9.4f %-9s %-10.4f %-10.4f\n",
                          asset.c_str(), 1.0 - c.alpha, fmt(c.k).c_str(), s.r_max, s.marginal_coverage, hv,
                          s.avg_width, s.avg_winkler);
            txt << line;
            if (!best || s.avg_winkler < outcomes[*best].summary.avg_winkler) best = j;
        }
        if (best) {
            const bool interior = *best != i && *best != end - 1;
            txt << "  best K = " << fmt(cells[*best].k) << " (Winkler " << fmt(outcomes[*best].summary.avg_winkler)
                << ", " << (interior ? "interior" : "grid endpoint") << ")\n";
        }
        i = end;
    }
    write_file(plan.out / "sweep.csv", csv.str());
    write_file(plan.out / "sweep.txt", txt.str());
    write_file(plan.out / "status.csv", status_csv(cells, outcomes));
    return finish(cells, outcomes);
}

}  // namespace sabcp_cli
