#include "sabcp/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace sabcp {

std::vector<double> default_gamma_grid() { return {0.001, 0.005, 0.01, 0.05, 0.1}; }

double default_aggregation_rate(std::size_t n_experts, double horizon) {
    return std::sqrt(8.0 * std::log(static_cast<double>(n_experts)) / horizon);
}

double pinball_loss(double margin, double score, double tau) {
    const double diff = score - margin;
    return diff >= 0.0 ? tau * diff : (tau - 1.0) * diff;
}

CalibrationWindow::CalibrationWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw Error(ErrorCode::invalid_argument, "calibration window must hold a score");
}

void CalibrationWindow::push(double score) {
    scores_.push_back(score);
    if (scores_.size() > capacity_) scores_.pop_front();
}

double CalibrationWindow::max() const {
    if (scores_.empty()) throw Error(ErrorCode::invalid_argument, "empty calibration window");
    return *std::max_element(scores_.begin(), scores_.end());
}

double CalibrationWindow::quantile(double level) const {
    if (scores_.empty()) throw Error(ErrorCode::invalid_argument, "empty calibration window");
    const auto n = static_cast<double>(scores_.size());
    // 1e-9 absorbs products such as 0.9 * 100 landing a hair above an integer
    auto rank = static_cast<std::size_t>(std::ceil(level * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, scores_.size());
    std::vector<double> sorted(scores_.begin(), scores_.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
    return sorted[rank - 1];
}

double aci_next_alpha(double alpha_t, double gamma, double alpha, bool missed) {
    const double err = missed ? 1.0 : 0.0;
    return std::clamp(alpha_t + gamma * (alpha - err), kAlphaFloor, kAlphaCeil);
}

double aci_margin(const CalibrationWindow& window, double alpha_t, double r_max) {
    if (window.empty()) return r_max;
    if (alpha_t <= kAlphaFloor) return std::max(r_max, window.max());
    return window.quantile(1.0 - alpha_t);
}

namespace {

bool missed_with(double margin, const Predictor& p, const IntervalForecast& emitted, double scale, double y) {
    const double half = interval_half_width(margin, scale, p.score_mode());
    return !interval_covers(emitted.center - half, emitted.center + half, y);
}

std::vector<double> resolve_grid(const BaselineOptions& opts) {
    return opts.gamma_grid.empty() ? default_gamma_grid() : opts.gamma_grid;
}

double resolve_eta(const BaselineOptions& opts, std::size_t n) {
    return opts.eta > 0.0 ? opts.eta : default_aggregation_rate(n);
}

}  // namespace

AciPredictor::AciPredictor(const SabcpConfig& cfg, const BaselineOptions& opts)
    : Predictor(validate_config(cfg).score_mode),
      alpha_(cfg.alpha),
      r_max_(cfg.r_max),
      state_{cfg.alpha, opts.gamma},
      window_(opts.window) {
    if (!(opts.gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "ACI step size must be positive");
}

AciPredictor::Margin AciPredictor::predict_margin(const StepInput&) {
    Margin m;
    m.q_hat = aci_margin(window_, state_.alpha_t, r_max_);
    return m;
}

void AciPredictor::ingest(double score, double y, const IntervalForecast& emitted) {
    const bool missed = !interval_covers(emitted.lower, emitted.upper, y);
    state_.alpha_t = aci_next_alpha(state_.alpha_t, state_.gamma, alpha_, missed);
    window_.push(score);
}

ExpertEnsemble::ExpertEnsemble(double alpha, std::span<const double> gammas, double eta)
    : alpha_(alpha), eta_(eta) {
    if (gammas.empty()) throw Error(ErrorCode::invalid_argument, "expert grid is empty");
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw Error(ErrorCode::invalid_argument, "aggregation rate must be finite and non-negative");
    }
    for (double g : gammas) {
        if (!(g > 0.0)) throw Error(ErrorCode::invalid_argument, "expert step sizes must be positive");
        experts_.push_back({alpha, g});
    }
    log_weights_.assign(experts_.size(), -std::log(static_cast<double>(experts_.size())));
}

std::vector<double> ExpertEnsemble::weights() const {
    std::vector<double> w(log_weights_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights_[i]);
    return w;
}

void ExpertEnsemble::reweight(std::span<const double> losses) {
    if (losses.size() != experts_.size()) throw Error(ErrorCode::invalid_argument, "one loss per expert");
    for (std::size_t i = 0; i < losses.size(); ++i) log_weights_[i] -= eta_ * losses[i];
    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    double total = 0.0;
    for (double lw : log_weights_) total += std::exp(lw - top);
    const double log_norm = top + std::log(total);
    for (double& lw : log_weights_) lw -= log_norm;
}

double ExpertEnsemble::weighted_average(std::span<const double> values) const {
    if (values.size() != experts_.size()) throw Error(ErrorCode::invalid_argument, "one value per expert");
    if (values.size() == 1) return values[0];
    // offsets from the first value, so equal values come back unchanged
    double acc = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = std::exp(log_weights_[i]);
        acc += w * (values[i] - values[0]);
        total += w;
    }
    return values[0] + acc / total;
}

void ExpertEnsemble::update_alphas(const std::vector<bool>& missed) {
    if (missed.size() != experts_.size()) throw Error(ErrorCode::invalid_argument, "one outcome per expert");
    for (std::size_t i = 0; i < experts_.size(); ++i) {
        experts_[i].alpha_t = aci_next_alpha(experts_[i].alpha_t, experts_[i].gamma, alpha_, missed[i]);
    }
}

AgAciPredictor::AgAciPredictor(const SabcpConfig& cfg, const BaselineOptions& opts)
    : Predictor(validate_config(cfg).score_mode),
      alpha_(cfg.alpha),
      r_max_(cfg.r_max),
      ensemble_(cfg.alpha, resolve_grid(opts), resolve_eta(opts, resolve_grid(opts).size())),
      window_(opts.window) {}

AgAciPredictor::Margin AgAciPredictor::predict_margin(const StepInput&) {
    margins_.resize(ensemble_.size());
    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
        margins_[i] = aci_margin(window_, ensemble_.experts()[i].alpha_t, r_max_);
    }
    Margin m;
    m.q_hat = ensemble_.weighted_average(margins_);
    return m;
}

void AgAciPredictor::ingest(double score, double y, const IntervalForecast& emitted) {
    const double tau = 1.0 - alpha_;
    std::vector<double> losses(ensemble_.size());
    std::vector<bool> missed(ensemble_.size());
    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
        losses[i] = pinball_loss(margins_[i], score, tau);
        missed[i] = missed_with(margins_[i], *this, emitted, pending_scale(), y);
    }
    ensemble_.reweight(losses);
    ensemble_.update_alphas(missed);
    window_.push(score);
}

DtAciPredictor::DtAciPredictor(const SabcpConfig& cfg, const BaselineOptions& opts)
    : Predictor(validate_config(cfg).score_mode),
      alpha_(cfg.alpha),
      r_max_(cfg.r_max),
      ensemble_(cfg.alpha, resolve_grid(opts), resolve_eta(opts, resolve_grid(opts).size())),
      window_(opts.window) {}

DtAciPredictor::Margin DtAciPredictor::predict_margin(const StepInput&) {
    std::vector<double> alphas(ensemble_.size());
    margins_.resize(ensemble_.size());
    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
        alphas[i] = ensemble_.experts()[i].alpha_t;
        margins_[i] = aci_margin(window_, alphas[i], r_max_);
    }
    Margin m;
    m.q_hat = aci_margin(window_, ensemble_.weighted_average(alphas), r_max_);
    return m;
}

void DtAciPredictor::ingest(double score, double y, const IntervalForecast& emitted) {
    const double tau = 1.0 - alpha_;
    std::vector<double> losses(ensemble_.size());
    std::vector<bool> missed(ensemble_.size());
    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
        losses[i] = pinball_loss(margins_[i], score, tau);
        missed[i] = missed_with(margins_[i], *this, emitted, pending_scale(), y);
    }
    ensemble_.reweight(losses);
    ensemble_.update_alphas(missed);
    window_.push(score);
}

}  // namespace sabcp
