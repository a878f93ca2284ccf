#include "sabcp/core.hpp"

#include <cmath>
#include <sstream>

namespace sabcp {

std::string_view to_string(ScoreMode mode) noexcept {
    return mode == ScoreMode::absolute ? "absolute" : "scaled";
}

std::optional<ScoreMode> parse_score_mode(std::string_view text) noexcept {
    if (text == "absolute") return ScoreMode::absolute;
    if (text == "scaled") return ScoreMode::scaled;
    return std::nullopt;
}

namespace {

bool open_unit(double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; }
bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::vector<ConfigIssue> config_issues(const SabcpConfig& cfg) {
    std::vector<ConfigIssue> issues;
    if (!open_unit(cfg.alpha)) issues.push_back({"alpha", "must lie in (0, 1)"});
    if (!open_unit(cfg.beta)) issues.push_back({"beta", "must lie in (0, 1)"});
    if (!positive(cfg.k)) issues.push_back({"k", "must be positive and finite"});
    if (!positive(cfg.r_max)) issues.push_back({"r_max", "must be positive and finite"});
    if (cfg.state_dim == 0) issues.push_back({"state_dim", "must be at least 1"});
    if (cfg.history_cap && *cfg.history_cap == 0) {
        issues.push_back({"history_cap", "must be at least 1 when set"});
    }
    if (!positive(cfg.bandwidth_floor)) {
        issues.push_back({"bandwidth_floor", "must be positive and finite"});
    }
    if (!positive(cfg.solver_tol)) issues.push_back({"solver_tol", "must be positive and finite"});
    if (cfg.solver_max_iter <= 0) issues.push_back({"solver_max_iter", "must be at least 1"});
    return issues;
}

const SabcpConfig& validate_config(const SabcpConfig& cfg) {
    const auto issues = config_issues(cfg);
    if (issues.empty()) return cfg;
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& issue : issues) msg << ' ' << issue.field << " (" << issue.message << ");";
    throw Error(ErrorCode::invalid_config, msg.str());
}

double nonconformity_score(double y, double center, double scale, ScoreMode mode) {
    const double residual = std::abs(y - center);
    if (mode == ScoreMode::absolute) return residual;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::invalid_argument, "scaled score needs a positive finite scale");
    }
    return residual / scale;
}

double interval_half_width(double q_hat, double scale, ScoreMode mode) noexcept {
    return mode == ScoreMode::scaled ? q_hat * scale : q_hat;
}

bool interval_covers(double lower, double upper, double y) noexcept {
    return lower <= y && y <= upper;
}

void Predictor::check_next_step(std::uint64_t t) const {
    if (pending_) {
        throw Error(ErrorCode::out_of_order, "forecast requested before the previous step was observed");
    }
    if (last_t_ && t != *last_t_ + 1) {
        std::ostringstream msg;
        msg << "step index " << t << " does not follow " << *last_t_;
        throw Error(ErrorCode::out_of_order, msg.str());
    }
}

IntervalForecast Predictor::forecast(const StepInput& input) {
    check_next_step(input.t);
    if (!std::isfinite(input.center)) {
        throw Error(ErrorCode::invalid_argument, "base forecast is not finite");
    }
    if (mode_ == ScoreMode::scaled && (!(input.scale > 0.0) || !std::isfinite(input.scale))) {
        throw Error(ErrorCode::invalid_argument, "scaled mode needs a positive finite scale");
    }
    for (double v : input.state) {
        if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "state is not finite");
    }

    const Margin m = predict_margin(input);

    IntervalForecast out;
    out.center = input.center;
    out.q_hat = m.q_hat;
    out.margin = interval_half_width(m.q_hat, input.scale, mode_);
    out.lower = input.center - out.margin;
    out.upper = input.center + out.margin;
    out.pi_s = m.pi_s;
    out.d_s = m.d_s;
    out.lambda_t = m.lambda_t;

    pending_state_.assign(input.state.begin(), input.state.end());
    pending_state_valid_ = input.state_valid;
    pending_scale_ = input.scale;
    last_t_ = input.t;
    pending_ = out;
    return out;
}

void Predictor::observe(double y) {
    if (!pending_) throw Error(ErrorCode::out_of_order, "observe() without a pending forecast");
    if (!std::isfinite(y)) throw Error(ErrorCode::invalid_argument, "observation is not finite");
    const IntervalForecast emitted = *pending_;
    const double score = nonconformity_score(y, emitted.center, pending_scale_, mode_);
    ingest(score, y, emitted);
    pending_.reset();
    ++observed_;
}

IntervalForecast stream_step(Predictor& predictor, const StepInput& input, double y) {
    if (!std::isfinite(y)) throw Error(ErrorCode::invalid_argument, "observation is not finite");
    predictor.check_next_step(input.t);
    const IntervalForecast out = predictor.forecast(input);
    predictor.observe(y);
    return out;
}

}  // namespace sabcp
