#include "sabcp/spatial_kde.hpp"

#include <algorithm>
#include <cmath>

#include "sabcp/core.hpp"
#include "sabcp/temporal_cdf.hpp"

namespace sabcp {

OnlineMoments::OnlineMoments(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

void OnlineMoments::push(std::span<const double> sample) {
    if (sample.size() != mean_.size()) {
        throw Error(ErrorCode::invalid_argument, "moment update dimension mismatch");
    }
    ++n_;
    const double n = static_cast<double>(n_);
    for (std::size_t j = 0; j < sample.size(); ++j) {
        const double delta = sample[j] - mean_[j];
        mean_[j] += delta / n;
        m2_[j] += delta * (sample[j] - mean_[j]);
    }
}

double OnlineMoments::variance(std::size_t j) const {
    if (n_ < 2) return 0.0;
    return std::max(0.0, m2_.at(j) / static_cast<double>(n_ - 1));
}

double OnlineMoments::stddev(std::size_t j) const { return std::sqrt(variance(j)); }

double scott_bandwidth(double sigma, std::size_t n, std::size_t d, double floor) {
    if (n == 0 || d == 0) throw Error(ErrorCode::invalid_argument, "bandwidth needs at least one sample");
    return std::max(sigma, floor) * std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
}

std::vector<double> bandwidth(const OnlineMoments& moments, double floor) {
    if (moments.count() == 0) throw Error(ErrorCode::invalid_argument, "bandwidth needs at least one sample");
    std::vector<double> h(moments.dim());
    for (std::size_t j = 0; j < h.size(); ++j) {
        h[j] = scott_bandwidth(moments.stddev(j), moments.count(), moments.dim(), floor);
    }
    return h;
}

double kernel_weight(std::span<const double> current, std::span<const double> past,
                     std::span<const double> h) {
    if (current.size() != past.size() || current.size() != h.size()) {
        throw Error(ErrorCode::invalid_argument, "kernel dimension mismatch");
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < current.size(); ++j) {
        const double z = (current[j] - past[j]) / h[j];
        sq += z * z;
    }
    return std::exp(-0.5 * sq);
}

SpatialArchive::SpatialArchive(std::size_t dim) : dim_(dim) {}

void SpatialArchive::push(std::span<const double> state, double score) {
    if (state.size() != dim_) throw Error(ErrorCode::invalid_argument, "state dimension mismatch");
    states_.insert(states_.end(), state.begin(), state.end());
    scores_.push_back(score);
}

bool SpatialArchive::pop_oldest() {
    if (scores_.empty()) return false;
    states_.erase(states_.begin(), states_.begin() + static_cast<std::ptrdiff_t>(dim_));
    scores_.erase(scores_.begin());
    return true;
}

std::span<const double> SpatialArchive::state(std::size_t i) const {
    if (i >= scores_.size()) throw Error(ErrorCode::invalid_argument, "archive index out of range");
    return std::span<const double>(states_).subspan(i * dim_, dim_);
}

void SpatialArchive::kernel_weights(std::span<const double> current, std::span<const double> h,
                                    std::vector<double>& out) const {
    if (current.size() != dim_ || h.size() != dim_) {
        throw Error(ErrorCode::invalid_argument, "kernel dimension mismatch");
    }
    out.resize(scores_.size());
    const double* row = states_.data();
    for (std::size_t i = 0; i < scores_.size(); ++i, row += dim_) {
        double sq = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            const double z = (current[j] - row[j]) / h[j];
            sq += z * z;
        }
        out[i] = std::exp(-0.5 * sq);
    }
}

double SpatialArchive::evidence(std::span<const double> current, std::span<const double> h) const {
    if (scores_.empty()) return 0.0;
    std::vector<double> w;
    kernel_weights(current, h, w);
    double total = 0.0;
    for (double v : w) total += v;
    return total;
}

double SpatialArchive::cdf(std::span<const double> current, std::span<const double> h, double r) const {
    std::vector<double> w;
    if (!scores_.empty()) kernel_weights(current, h, w);
    double total = 0.0;
    for (double v : w) total += v;
    if (!(total > 0.0)) throw Error(ErrorCode::invalid_argument, "spatial CDF needs positive evidence");
    return weighted_cdf(scores_, w, r);
}

}  // namespace sabcp
