#include "sabcp/pipeline.hpp"

#include <cmath>

#include "sabcp/gate_mixture.hpp"

namespace sabcp {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::sabcp: return "sabcp";
        case Method::bcp: return "bcp";
        case Method::aci: return "aci";
        case Method::agaci: return "agaci";
        case Method::dtaci: return "dtaci";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
    for (Method m : {Method::sabcp, Method::bcp, Method::aci, Method::agaci, Method::dtaci}) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

std::unique_ptr<Predictor> make_predictor(Method m, const SabcpConfig& cfg, const BaselineOptions& opts) {
    switch (m) {
        case Method::sabcp: return std::make_unique<SabcpEngine>(cfg, false);
        case Method::bcp: return std::make_unique<SabcpEngine>(cfg, true);
        case Method::aci: return std::make_unique<AciPredictor>(cfg, opts);
        case Method::agaci: return std::make_unique<AgAciPredictor>(cfg, opts);
        case Method::dtaci: return std::make_unique<DtAciPredictor>(cfg, opts);
    }
    throw Error(ErrorCode::invalid_argument, "unknown method");
}

namespace {

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

StepRecord record_step(std::uint64_t t, double y, const IntervalForecast& f, double alpha) {
    StepRecord r = make_record(t, y, f.center, f.lower, f.upper, alpha);
    r.q_hat = f.q_hat;
    r.pi_s = f.pi_s;
    r.d_s = f.d_s;
    r.lambda_t = f.lambda_t;
    return r;
}

void finish(CellResult& cell, HighVolRule rule) {
    std::vector<double> ys(cell.records.size());
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = cell.records[i].y;
    const auto mask = high_vol_mask(ys, rule);
    for (std::size_t i = 0; i < mask.size(); ++i) cell.records[i].high_vol = mask[i];
    cell.report = aggregate(cell.records, mask);
}

}  // namespace

CellResult run_returns(const ReturnSeries& series, Method m, SabcpConfig cfg, const RunOptions& opts) {
    const auto& r = series.returns;
    if (r.size() <= opts.warmup) {
        throw Error(ErrorCode::insufficient_data, series.asset + ": no returns left after the warmup window");
    }
    const std::span<const double> warm(r.data(), opts.warmup);
    GarchModel garch = GarchModel::from_warmup(warm, opts.garch_a, opts.garch_b);
    StateBuilder states(cfg.state_dim);

    // filter through the warmup so the evaluation starts from a conditioned variance
    std::vector<double> warm_scores;
    warm_scores.reserve(warm.size());
    for (double x : warm) {
        const GarchForecast f = garch.step(x);
        warm_scores.push_back(nonconformity_score(x, f.center, f.scale, cfg.score_mode));
        states.push(x);
    }
    if (opts.auto_r_max) {
        const double sd = sample_stddev(warm_scores);
        if (!(sd > 0.0)) throw Error(ErrorCode::insufficient_data, series.asset + ": warmup scores are constant");
        cfg.r_max = kAutoRMaxFactor * sd;
    }
    validate_config(cfg);

    auto predictor = make_predictor(m, cfg, opts.baselines);
    CellResult cell;
    cell.r_max = cfg.r_max;
    cell.records.reserve(r.size() - opts.warmup);
    for (std::size_t t = opts.warmup; t < r.size(); ++t) {
        const GarchForecast f = garch.forecast();
        const SpatialState s = states.build();
        const StepInput input{t, f.center, f.scale, s.values, !s.cold};
        const IntervalForecast fc = stream_step(*predictor, input, r[t]);
        garch.update(r[t]);
        states.push(r[t]);
        cell.records.push_back(record_step(t, r[t], fc, cfg.alpha));
    }
    finish(cell, opts.high_vol);
    return cell;
}

CellResult run_synthetic(const SyntheticStream& stream, Method m, SabcpConfig cfg, const RunOptions& opts) {
    if (stream.size() == 0) throw Error(ErrorCode::insufficient_data, "empty synthetic stream");
    cfg.state_dim = 1;
    validate_config(cfg);
    auto predictor = make_predictor(m, cfg, opts.baselines);
    CellResult cell;
    cell.r_max = cfg.r_max;
    cell.records.reserve(stream.size());
    for (std::size_t t = 0; t < stream.size(); ++t) {
        const double x = stream.x[t];
        const StepInput input{t, 0.0, 1.0, std::span<const double>(&x, 1), true};
        const IntervalForecast fc = stream_step(*predictor, input, stream.y[t]);
        cell.records.push_back(record_step(t, stream.y[t], fc, cfg.alpha));
    }
    finish(cell, opts.high_vol);
    return cell;
}

}  // namespace sabcp
