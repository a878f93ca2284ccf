#include "sabcp/sabcp.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <string>

#include "sabcp/garch.hpp"
#include "sabcp/metrics.hpp"
#include "sabcp/pipeline.hpp"
#include "sabcp/theory.hpp"

struct sabcp_predictor {
    std::unique_ptr<sabcp::Predictor> impl;
};

struct sabcp_garch {
    sabcp::GarchModel impl;
};

struct sabcp_series {
    sabcp::ReturnSeries impl;
};

struct sabcp_synth {
    sabcp::SyntheticStream impl;
};

struct sabcp_run {
    sabcp::CellResult impl;
};

namespace {

thread_local std::string g_last_error;

sabcp_status to_status(sabcp::ErrorCode code) {
    using sabcp::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return SABCP_E_INVALID_ARGUMENT;
        case ErrorCode::invalid_config: return SABCP_E_INVALID_CONFIG;
        case ErrorCode::out_of_order: return SABCP_E_OUT_OF_ORDER;
        case ErrorCode::io: return SABCP_E_IO;
        case ErrorCode::parse: return SABCP_E_PARSE;
        case ErrorCode::insufficient_data: return SABCP_E_INSUFFICIENT_DATA;
    }
    return SABCP_E_INTERNAL;
}

template <class F>
sabcp_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return SABCP_OK;
    } catch (const sabcp::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SABCP_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SABCP_E_INTERNAL;
    }
}

sabcp_status null_argument(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return SABCP_E_INVALID_ARGUMENT;
}

sabcp::SabcpConfig to_cpp(const sabcp_config& c) {
    sabcp::SabcpConfig cfg;
    cfg.alpha = c.alpha;
    cfg.beta = c.beta;
    cfg.k = c.k;
    cfg.r_max = c.r_max;
    cfg.state_dim = c.state_dim;
    if (c.history_cap > 0) cfg.history_cap = c.history_cap;
    cfg.score_mode = c.score_mode == SABCP_SCORE_ABSOLUTE ? sabcp::ScoreMode::absolute : sabcp::ScoreMode::scaled;
    cfg.bandwidth_floor = c.bandwidth_floor;
    cfg.solver_tol = c.solver_tol;
    cfg.solver_max_iter = c.solver_max_iter;
    return cfg;
}

sabcp::RunOptions to_cpp(const sabcp_run_options* o) {
    sabcp::RunOptions opts;
    if (!o) return opts;
    opts.warmup = o->warmup;
    opts.garch_a = o->garch_a;
    opts.garch_b = o->garch_b;
    opts.auto_r_max = o->auto_r_max != 0;
    opts.high_vol = o->high_vol == SABCP_HIGH_VOL_EXPANDING ? sabcp::HighVolRule::expanding
                                                            : sabcp::HighVolRule::hindsight;
    opts.baselines.window = o->window;
    opts.baselines.gamma = o->gamma;
    opts.baselines.eta = o->eta;
    return opts;
}

sabcp::Method to_cpp(sabcp_method m) {
    switch (m) {
        case SABCP_METHOD_SABCP: return sabcp::Method::sabcp;
        case SABCP_METHOD_BCP: return sabcp::Method::bcp;
        case SABCP_METHOD_ACI: return sabcp::Method::aci;
        case SABCP_METHOD_AGACI: return sabcp::Method::agaci;
        case SABCP_METHOD_DTACI: return sabcp::Method::dtaci;
    }
    throw sabcp::Error(sabcp::ErrorCode::invalid_argument, "unknown method");
}

sabcp::StepInput to_cpp(const sabcp_step_input& in) {
    if (in.state_len > 0 && !in.state) {
        throw sabcp::Error(sabcp::ErrorCode::invalid_argument, "state pointer is null");
    }
    return {in.t, in.center, in.scale, std::span<const double>(in.state, in.state_len), in.state_valid != 0};
}

void to_c(const sabcp::IntervalForecast& f, sabcp_interval* out) {
    out->center = f.center;
    out->margin = f.margin;
    out->lower = f.lower;
    out->upper = f.upper;
    out->q_hat = f.q_hat;
    out->pi_s = f.pi_s;
    out->d_s = f.d_s;
    out->lambda_t = f.lambda_t;
}

}  // namespace

extern "C" {

const char* sabcp_version(void) { return "0.1.0"; }

const char* sabcp_status_string(sabcp_status status) {
    switch (status) {
        case SABCP_OK: return "ok";
        case SABCP_E_INVALID_ARGUMENT: return "invalid argument";
        case SABCP_E_INVALID_CONFIG: return "invalid config";
        case SABCP_E_OUT_OF_ORDER: return "out of order";
        case SABCP_E_IO: return "i/o error";
        case SABCP_E_PARSE: return "parse error";
        case SABCP_E_INSUFFICIENT_DATA: return "insufficient data";
        case SABCP_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* sabcp_last_error(void) { return g_last_error.c_str(); }

const char* sabcp_method_name(sabcp_method method) {
    try {
        return sabcp::to_string(to_cpp(method)).data();
    } catch (...) {
        return "unknown";
    }
}

sabcp_status sabcp_method_parse(const char* name, sabcp_method* out) {
    if (!name || !out) return null_argument("name/out");
    return guarded([&] {
        const auto m = sabcp::parse_method(name);
        if (!m) throw sabcp::Error(sabcp::ErrorCode::invalid_argument, std::string("unknown method `") + name + "`");
        *out = static_cast<sabcp_method>(static_cast<int>(*m));
    });
}

void sabcp_config_init(sabcp_config* cfg) {
    if (!cfg) return;
    const sabcp::SabcpConfig d;
    cfg->alpha = d.alpha;
    cfg->beta = d.beta;
    cfg->k = d.k;
    cfg->r_max = d.r_max;
    cfg->state_dim = d.state_dim;
    cfg->history_cap = 0;
    cfg->score_mode = SABCP_SCORE_SCALED;
    cfg->bandwidth_floor = d.bandwidth_floor;
    cfg->solver_tol = d.solver_tol;
    cfg->solver_max_iter = d.solver_max_iter;
}

sabcp_status sabcp_config_validate(const sabcp_config* cfg) {
    if (!cfg) return null_argument("cfg");
    return guarded([&] { sabcp::validate_config(to_cpp(*cfg)); });
}

sabcp_status sabcp_predictor_create(sabcp_method method, const sabcp_config* cfg,
                                    const sabcp_run_options* opts, sabcp_predictor** out) {
    if (!cfg || !out) return null_argument("cfg/out");
    *out = nullptr;
    return guarded([&] {
        sabcp_run_options defaults;
        sabcp_run_options_init(&defaults);
        const auto run_opts = to_cpp(opts ? opts : &defaults);
        auto impl = sabcp::make_predictor(to_cpp(method), to_cpp(*cfg), run_opts.baselines);
        *out = new sabcp_predictor{std::move(impl)};
    });
}

void sabcp_predictor_destroy(sabcp_predictor* p) { delete p; }

sabcp_status sabcp_predictor_predict(sabcp_predictor* p, const sabcp_step_input* in, sabcp_interval* out) {
    if (!p || !in || !out) return null_argument("predictor/input/out");
    return guarded([&] { to_c(p->impl->forecast(to_cpp(*in)), out); });
}

sabcp_status sabcp_predictor_update(sabcp_predictor* p, double y) {
    if (!p) return null_argument("predictor");
    return guarded([&] { p->impl->observe(y); });
}

sabcp_status sabcp_predictor_step(sabcp_predictor* p, const sabcp_step_input* in, double y, sabcp_interval* out) {
    if (!p || !in || !out) return null_argument("predictor/input/out");
    return guarded([&] { to_c(sabcp::stream_step(*p->impl, to_cpp(*in), y), out); });
}

sabcp_status sabcp_garch_create(const double* warmup, size_t n, double a, double b, sabcp_garch** out) {
    if (!out || (n > 0 && !warmup)) return null_argument("warmup/out");
    *out = nullptr;
    return guarded([&] {
        *out = new sabcp_garch{sabcp::GarchModel::from_warmup(std::span<const double>(warmup, n), a, b)};
    });
}

void sabcp_garch_destroy(sabcp_garch* g) { delete g; }

sabcp_status sabcp_garch_step(sabcp_garch* g, double r, double* center, double* scale) {
    if (!g) return null_argument("garch");
    return guarded([&] {
        const auto f = g->impl.step(r);
        if (center) *center = f.center;
        if (scale) *scale = f.scale;
    });
}

double sabcp_garch_sigma2(const sabcp_garch* g) { return g ? g->impl.sigma2() : std::nan(""); }
double sabcp_garch_omega(const sabcp_garch* g) { return g ? g->impl.omega() : std::nan(""); }

sabcp_status sabcp_series_load(const char* path, const char* asset, size_t min_rows, sabcp_series** out) {
    if (!path || !out) return null_argument("path/out");
    *out = nullptr;
    return guarded([&] {
        auto s = sabcp::load_prices(path, asset ? asset : "", min_rows == 0 ? sabcp::kMinPriceRows : min_rows);
        *out = new sabcp_series{std::move(s)};
    });
}

sabcp_status sabcp_series_save(const sabcp_series* s, const char* path) {
    if (!s || !path) return null_argument("series/path");
    return guarded([&] {
        std::ofstream f(path);
        if (!f) throw sabcp::Error(sabcp::ErrorCode::io, std::string("cannot write ") + path);
        sabcp::write_prices(f, s->impl);
        if (!f) throw sabcp::Error(sabcp::ErrorCode::io, std::string("write failed: ") + path);
    });
}

void sabcp_series_destroy(sabcp_series* s) { delete s; }
const char* sabcp_series_asset(const sabcp_series* s) { return s ? s->impl.asset.c_str() : ""; }
size_t sabcp_series_length(const sabcp_series* s) { return s ? s->impl.returns.size() : 0; }
const double* sabcp_series_returns(const sabcp_series* s) { return s ? s->impl.returns.data() : nullptr; }

const char* sabcp_series_return_date(const sabcp_series* s, size_t i) {
    if (!s || i + 1 >= s->impl.dates.size()) return "";
    return s->impl.dates[i + 1].c_str();
}

size_t sabcp_series_dropped_rows(const sabcp_series* s) { return s ? s->impl.dropped_rows : 0; }

void sabcp_synth_spec_init(sabcp_synth_spec* spec) {
    if (!spec) return;
    static const size_t kStarts[] = {200, 450, 700};
    const sabcp::SyntheticSpec d;
    spec->total_steps = d.total_steps;
    spec->shock_starts = kStarts;
    spec->n_shocks = 3;
    spec->shock_len = d.shock_len;
    spec->seed = d.seed;
    spec->normal_x_mean = d.normal.x_mean;
    spec->normal_x_sd = d.normal.x_sd;
    spec->normal_y_mean = d.normal.y_mean;
    spec->normal_y_sd = d.normal.y_sd;
    spec->shock_x_mean = d.shock.x_mean;
    spec->shock_x_sd = d.shock.x_sd;
    spec->shock_y_mean = d.shock.y_mean;
    spec->shock_y_sd = d.shock.y_sd;
}

sabcp_status sabcp_synth_generate(const sabcp_synth_spec* spec, sabcp_synth** out) {
    if (!spec || !out || (spec->n_shocks > 0 && !spec->shock_starts)) return null_argument("spec/out");
    *out = nullptr;
    return guarded([&] {
        sabcp::SyntheticSpec s;
        s.total_steps = spec->total_steps;
        s.shock_starts.assign(spec->shock_starts, spec->shock_starts + spec->n_shocks);
        s.shock_len = spec->shock_len;
        s.seed = spec->seed;
        s.normal = {spec->normal_x_mean, spec->normal_x_sd, spec->normal_y_mean, spec->normal_y_sd};
        s.shock = {spec->shock_x_mean, spec->shock_x_sd, spec->shock_y_mean, spec->shock_y_sd};
        *out = new sabcp_synth{sabcp::synth_stream(s)};
    });
}

void sabcp_synth_destroy(sabcp_synth* s) { delete s; }
size_t sabcp_synth_length(const sabcp_synth* s) { return s ? s->impl.size() : 0; }
const double* sabcp_synth_x(const sabcp_synth* s) { return s ? s->impl.x.data() : nullptr; }
const double* sabcp_synth_y(const sabcp_synth* s) { return s ? s->impl.y.data() : nullptr; }

int sabcp_synth_is_shock(const sabcp_synth* s, size_t i) {
    return s && i < s->impl.shock.size() && s->impl.shock[i] ? 1 : 0;
}

void sabcp_run_options_init(sabcp_run_options* opts) {
    if (!opts) return;
    const sabcp::RunOptions d;
    opts->warmup = d.warmup;
    opts->garch_a = d.garch_a;
    opts->garch_b = d.garch_b;
    opts->auto_r_max = d.auto_r_max ? 1 : 0;
    opts->high_vol = SABCP_HIGH_VOL_HINDSIGHT;
    opts->window = d.baselines.window;
    opts->gamma = d.baselines.gamma;
    opts->eta = d.baselines.eta;
}

sabcp_status sabcp_run_returns(const sabcp_series* s, sabcp_method method, const sabcp_config* cfg,
                               const sabcp_run_options* opts, sabcp_run** out) {
    if (!s || !cfg || !out) return null_argument("series/cfg/out");
    *out = nullptr;
    return guarded([&] {
        sabcp_run_options defaults;
        sabcp_run_options_init(&defaults);
        auto cell = sabcp::run_returns(s->impl, to_cpp(method), to_cpp(*cfg), to_cpp(opts ? opts : &defaults));
        *out = new sabcp_run{std::move(cell)};
    });
}

sabcp_status sabcp_run_synthetic(const sabcp_synth* s, sabcp_method method, const sabcp_config* cfg,
                                 const sabcp_run_options* opts, sabcp_run** out) {
    if (!s || !cfg || !out) return null_argument("stream/cfg/out");
    *out = nullptr;
    return guarded([&] {
        sabcp_run_options defaults;
        sabcp_run_options_init(&defaults);
        auto cell = sabcp::run_synthetic(s->impl, to_cpp(method), to_cpp(*cfg), to_cpp(opts ? opts : &defaults));
        *out = new sabcp_run{std::move(cell)};
    });
}

void sabcp_run_destroy(sabcp_run* r) { delete r; }
size_t sabcp_run_length(const sabcp_run* r) { return r ? r->impl.records.size() : 0; }

sabcp_status sabcp_run_record(const sabcp_run* r, size_t i, sabcp_step_record* out) {
    if (!r || !out) return null_argument("run/out");
    if (i >= r->impl.records.size()) {
        g_last_error = "record index out of range";
        return SABCP_E_INVALID_ARGUMENT;
    }
    const auto& rec = r->impl.records[i];
    out->t = rec.t;
    out->y = rec.y;
    out->center = rec.center;
    out->lower = rec.lower;
    out->upper = rec.upper;
    out->covered = rec.covered ? 1 : 0;
    out->width = rec.width;
    out->winkler = rec.winkler;
    out->q_hat = rec.q_hat;
    out->pi_s = rec.pi_s;
    out->d_s = rec.d_s;
    out->lambda_t = rec.lambda_t;
    out->high_vol = rec.high_vol ? 1 : 0;
    return SABCP_OK;
}

void sabcp_run_summary(const sabcp_run* r, sabcp_summary* out) {
    if (!r || !out) return;
    const auto& rep = r->impl.report;
    out->marginal_coverage = rep.marginal_coverage;
    out->has_high_vol = rep.high_vol_coverage ? 1 : 0;
    out->high_vol_coverage = rep.high_vol_coverage.value_or(std::numeric_limits<double>::quiet_NaN());
    out->avg_width = rep.avg_width;
    out->avg_winkler = rep.avg_winkler;
    out->n_steps = rep.n_steps;
    out->n_high_vol = rep.n_high_vol;
    out->r_max = r->impl.r_max;
}

sabcp_status sabcp_winkler(double lower, double upper, double y, double alpha, double* out) {
    if (!out) return null_argument("out");
    return guarded([&] { *out = sabcp::winkler(lower, upper, y, alpha); });
}

sabcp_status sabcp_mixture_mse(double d_s, double v0, double m_t, double k, double* out) {
    if (!out) return null_argument("out");
    return guarded([&] { *out = sabcp::mixture_mse({d_s, v0, m_t}, k); });
}

sabcp_status sabcp_optimal_k(double v0, double m_t, double* out) {
    if (!out) return null_argument("out");
    return guarded([&] { *out = sabcp::optimal_k(v0, m_t); });
}

}  // extern "C"
