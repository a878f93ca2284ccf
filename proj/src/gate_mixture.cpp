#include "sabcp/gate_mixture.hpp"

#include <algorithm>
#include <cmath>

namespace sabcp {

double spatial_proportion(double d_s, double k) {
    if (!(d_s >= 0.0)) throw Error(ErrorCode::invalid_argument, "spatial evidence must be non-negative");
    if (!(k > 0.0)) throw Error(ErrorCode::invalid_argument, "K must be positive");
    return d_s / (d_s + k);
}

double prior_weight(std::uint64_t t) { return 1.0 / std::sqrt(1.0 + static_cast<double>(t)); }

double MixtureQuery::search_upper() const {
    double upper = r_max;
    for (double e : temporal.scores) upper = std::max(upper, e);
    for (double e : spatial.scores) upper = std::max(upper, e);
    return upper;
}

double mixture_cdf(const MixtureQuery& q, double r) {
    double bracket = 0.0;
    if (q.pi_s > 0.0 && q.spatial.scores.empty()) {
        throw Error(ErrorCode::invalid_argument, "positive spatial proportion with no spatial evidence");
    }
    if (!q.temporal.scores.empty()) {
        const double f_t = weighted_cdf(q.temporal.scores, q.temporal.weights, r);
        const double f_s = q.pi_s > 0.0 ? weighted_cdf(q.spatial.scores, q.spatial.weights, r) : 0.0;
        bracket = q.pi_s * f_s + (1.0 - q.pi_s) * f_t;
    }
    const double prior = std::min(r / q.r_max, 1.0);
    return (1.0 - q.lambda_t) * bracket + q.lambda_t * prior;
}

double solve_quantile(const MixtureQuery& q, double alpha, SolverOptions opts) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
    return bisect_quantile([&](double r) { return mixture_cdf(q, r); }, q.search_upper(), 1.0 - alpha,
                           opts);
}

SabcpEngine::SabcpEngine(const SabcpConfig& cfg, bool temporal_only)
    : Predictor(validate_config(cfg).score_mode),
      cfg_(cfg),
      temporal_only_(temporal_only),
      temporal_(cfg.beta),
      spatial_(cfg.state_dim),
      moments_(cfg.state_dim) {}

void SabcpEngine::gate(const StepInput& input, double& pi_s, double& d_s) {
    pi_s = 0.0;
    d_s = 0.0;
    if (temporal_only_ || !input.state_valid) return;
    if (input.state.size() != cfg_.state_dim) {
        throw Error(ErrorCode::invalid_argument, "state dimension does not match state_dim");
    }
    if (spatial_.empty()) return;
    h_ = bandwidth(moments_, cfg_.bandwidth_floor);
    spatial_.kernel_weights(input.state, h_, kernel_);
    for (double w : kernel_) d_s += w;
    if (d_s > 0.0) pi_s = spatial_proportion(d_s, cfg_.k);
}

MixtureQuery SabcpEngine::query_for(const StepInput& input) {
    MixtureQuery q;
    double d_s = 0.0;
    gate(input, q.pi_s, d_s);
    q.lambda_t = prior_weight(ingested_);
    q.r_max = cfg_.r_max;
    temporal_.fill_weights(temporal_w_);
    q.temporal = {temporal_.scores(), temporal_w_};
    if (q.pi_s > 0.0) q.spatial = {spatial_.scores(), kernel_};
    return q;
}

SabcpEngine::Margin SabcpEngine::predict_margin(const StepInput& input) {
    Margin m;
    gate(input, m.pi_s, m.d_s);
    m.lambda_t = prior_weight(ingested_);

    const double lambda = m.lambda_t;
    const double r_max = cfg_.r_max;
    const SolverOptions opts{cfg_.solver_tol, cfg_.solver_max_iter};
    const double level = 1.0 - cfg_.alpha;

    if (ranked_.empty()) {
        // cold start: the bracketed term is zero
        m.q_hat = bisect_quantile([&](double r) { return lambda * std::min(r / r_max, 1.0); }, r_max,
                                  level, opts);
        return m;
    }

    temporal_.fill_weights(temporal_w_);
    double temporal_total = 0.0;
    for (double w : temporal_w_) temporal_total += w;

    const double pi_s = m.pi_s;
    const double temporal_share = (1.0 - pi_s) / temporal_total;
    const double spatial_share = pi_s > 0.0 ? pi_s / m.d_s : 0.0;
    const std::uint64_t first_seq = ingested_ - temporal_.size();
    const std::int64_t first_spatial =
        static_cast<std::int64_t>(spatial_pushed_) - static_cast<std::int64_t>(spatial_.size());

    sorted_.resize(ranked_.size());
    cumulative_.resize(ranked_.size());
    double running = 0.0;
    for (std::size_t k = 0; k < ranked_.size(); ++k) {
        const Ranked& e = ranked_[k];
        double mass = temporal_share * temporal_w_[e.seq - first_seq];
        if (spatial_share > 0.0 && e.spatial_seq >= 0) {
            mass += spatial_share * kernel_[static_cast<std::size_t>(e.spatial_seq - first_spatial)];
        }
        running += mass;
        sorted_[k] = e.score;
        cumulative_[k] = running;
    }

    const auto cdf = [&](double r) {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), r);
        const double empirical = it == sorted_.begin() ? 0.0 : cumulative_[static_cast<std::size_t>(it - sorted_.begin()) - 1];
        return (1.0 - lambda) * empirical + lambda * std::min(r / r_max, 1.0);
    };
    const double upper = std::max(r_max, sorted_.back());
    m.q_hat = bisect_quantile(cdf, upper, level, opts);
    return m;
}

void SabcpEngine::ingest(double score, double /*y*/, const IntervalForecast& /*emitted*/) {
    Ranked entry{score, ingested_, -1};
    if (!temporal_only_ && pending_state_valid() && !pending_state().empty()) {
        spatial_.push(pending_state(), score);
        moments_.push(pending_state());
        entry.spatial_seq = static_cast<std::int64_t>(spatial_pushed_++);
    }
    temporal_.push(score);
    const auto pos = std::upper_bound(ranked_.begin(), ranked_.end(), score,
                                      [](double v, const Ranked& r) { return v < r.score; });
    ranked_.insert(pos, entry);
    ++ingested_;
    if (cfg_.history_cap && temporal_.size() > *cfg_.history_cap) drop_oldest();
}

void SabcpEngine::drop_oldest() {
    const std::uint64_t oldest = ingested_ - temporal_.size();
    temporal_.pop_oldest();
    const auto it = std::find_if(ranked_.begin(), ranked_.end(),
                                 [&](const Ranked& r) { return r.seq == oldest; });
    if (it == ranked_.end()) return;
    if (it->spatial_seq >= 0) spatial_.pop_oldest();
    ranked_.erase(it);
}

}  // namespace sabcp
