#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sabcp {

/// beta^(t-1-i) for 0 <= i < t.
double temporal_weight(std::size_t i, std::size_t t, double beta);

/// Sum of the n most recent discount weights, (1 - beta^n) / (1 - beta).
double temporal_total_weight(std::size_t n, double beta);

/// Weighted empirical CDF: sum w_i 1(E_i <= r) / sum w_i. Direct O(n) summation.
/// Throws on empty input or a non-positive total weight.
double weighted_cdf(std::span<const double> scores, std::span<const double> weights, double r);

/// Discounted CDF over scores in arrival order (oldest first).
double temporal_cdf(std::span<const double> scores, double beta, double r);

/// Arrival-ordered score archive with geometric recency weights.
class TemporalArchive {
public:
    explicit TemporalArchive(double beta, std::optional<std::size_t> cap = std::nullopt);

    void push(double score);
    /// Drops the oldest score; returns false when empty.
    bool pop_oldest();

    std::size_t size() const noexcept { return scores_.size(); }
    bool empty() const noexcept { return scores_.empty(); }
    double beta() const noexcept { return beta_; }
    std::span<const double> scores() const noexcept { return scores_; }

    /// Current weight of the k-th stored score (k = 0 is the oldest).
    double weight(std::size_t k) const;
    /// Sum of current weights over stored scores.
    double total_weight() const;
    /// Current weights of all stored scores, oldest first.
    std::vector<double> weights() const;
    void fill_weights(std::vector<double>& out) const;

    double cdf(double r) const;

private:
    double power(std::size_t exponent) const;

    double beta_;
    std::optional<std::size_t> cap_;
    std::vector<double> scores_;
    // beta^k cache, grown on demand
    mutable std::vector<double> powers_;
};

}  // namespace sabcp
