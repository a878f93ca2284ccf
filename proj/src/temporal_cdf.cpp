#include "sabcp/temporal_cdf.hpp"

#include <cmath>

#include "sabcp/core.hpp"

namespace sabcp {

double temporal_weight(std::size_t i, std::size_t t, double beta) {
    if (i >= t) throw Error(ErrorCode::invalid_argument, "temporal_weight needs i < t");
    return std::pow(beta, static_cast<double>(t - 1 - i));
}

double temporal_total_weight(std::size_t n, double beta) {
    return (1.0 - std::pow(beta, static_cast<double>(n))) / (1.0 - beta);
}

double weighted_cdf(std::span<const double> scores, std::span<const double> weights, double r) {
    if (scores.empty()) throw Error(ErrorCode::invalid_argument, "empty score archive");
    if (scores.size() != weights.size()) {
        throw Error(ErrorCode::invalid_argument, "scores and weights differ in length");
    }
    double covered = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        total += weights[i];
        if (scores[i] <= r) covered += weights[i];
    }
    if (!(total > 0.0)) throw Error(ErrorCode::invalid_argument, "zero total weight");
    return covered / total;
}

double temporal_cdf(std::span<const double> scores, double beta, double r) {
    if (scores.empty()) throw Error(ErrorCode::invalid_argument, "empty score archive");
    std::vector<double> w(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) w[i] = temporal_weight(i, scores.size(), beta);
    return weighted_cdf(scores, w, r);
}

TemporalArchive::TemporalArchive(double beta, std::optional<std::size_t> cap)
    : beta_(beta), cap_(cap) {
    if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::invalid_argument, "beta must lie in (0, 1)");
}

void TemporalArchive::push(double score) {
    scores_.push_back(score);
    if (cap_ && scores_.size() > *cap_) scores_.erase(scores_.begin());
}

bool TemporalArchive::pop_oldest() {
    if (scores_.empty()) return false;
    scores_.erase(scores_.begin());
    return true;
}

double TemporalArchive::power(std::size_t exponent) const {
    while (powers_.size() <= exponent) {
        powers_.push_back(std::pow(beta_, static_cast<double>(powers_.size())));
    }
    return powers_[exponent];
}

double TemporalArchive::weight(std::size_t k) const {
    if (k >= scores_.size()) throw Error(ErrorCode::invalid_argument, "archive index out of range");
    return power(scores_.size() - 1 - k);
}

double TemporalArchive::total_weight() const {
    double total = 0.0;
    for (std::size_t k = 0; k < scores_.size(); ++k) total += power(k);
    return total;
}

std::vector<double> TemporalArchive::weights() const {
    std::vector<double> w;
    fill_weights(w);
    return w;
}

void TemporalArchive::fill_weights(std::vector<double>& out) const {
    out.resize(scores_.size());
    if (!out.empty()) power(out.size() - 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = powers_[out.size() - 1 - k];
}

double TemporalArchive::cdf(double r) const {
    if (scores_.empty()) throw Error(ErrorCode::invalid_argument, "empty score archive");
    return weighted_cdf(scores_, weights(), r);
}

}  // namespace sabcp
