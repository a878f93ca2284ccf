#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sabcp {

/// Per-dimension Welford accumulator.
class OnlineMoments {
public:
    explicit OnlineMoments(std::size_t dim);

    void push(std::span<const double> sample);

    std::size_t dim() const noexcept { return mean_.size(); }
    std::size_t count() const noexcept { return n_; }
    std::span<const double> mean() const noexcept { return mean_; }
    std::span<const double> m2() const noexcept { return m2_; }

    /// Sample variance m2/(n-1); zero below two samples.
    double variance(std::size_t j) const;
    double stddev(std::size_t j) const;

private:
    std::size_t n_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

/// Scott rule for one dimension: max(sigma, floor) * n^(-1/(d+4)).
double scott_bandwidth(double sigma, std::size_t n, std::size_t d, double floor);

/// Online Scott rule: h_j = max(sigma_j, floor) * N^(-1/(d+4)).
std::vector<double> bandwidth(const OnlineMoments& moments, double floor);

/// Anisotropic Gaussian similarity exp(-0.5 * sum ((a_j - b_j)/h_j)^2).
double kernel_weight(std::span<const double> current, std::span<const double> past,
                     std::span<const double> h);

/// Archived (state, score) pairs in arrival order.
class SpatialArchive {
public:
    explicit SpatialArchive(std::size_t dim);

    void push(std::span<const double> state, double score);
    bool pop_oldest();

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return scores_.size(); }
    bool empty() const noexcept { return scores_.empty(); }

    std::span<const double> state(std::size_t i) const;
    std::span<const double> scores() const noexcept { return scores_; }

    /// Kernel weight of every archived state against `current`, oldest first.
    void kernel_weights(std::span<const double> current, std::span<const double> h,
                        std::vector<double>& out) const;

    /// Total evidence D^S; zero for an empty archive.
    double evidence(std::span<const double> current, std::span<const double> h) const;

    /// Kernel-weighted CDF. Throws Error(invalid_argument) on zero evidence.
    double cdf(std::span<const double> current, std::span<const double> h, double r) const;

private:
    std::size_t dim_;
    std::vector<double> states_;
    std::vector<double> scores_;
};

}  // namespace sabcp
