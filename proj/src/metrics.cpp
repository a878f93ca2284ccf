#include "sabcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sabcp/core.hpp"

namespace sabcp {

double winkler(double lower, double upper, double y, double alpha) {
    if (!(upper >= lower)) throw Error(ErrorCode::invalid_argument, "interval is inverted");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
    double score = upper - lower;
    if (y < lower) score += (2.0 / alpha) * (lower - y);
    if (y > upper) score += (2.0 / alpha) * (y - upper);
    return score;
}

namespace {

// The ceil(0.1 n)-th largest of `abs_values`.
double top_decile_threshold(std::vector<double> abs_values) {
    const std::size_t n = abs_values.size();
    const auto count = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n) - 1e-9));
    const std::size_t rank = std::clamp<std::size_t>(count, 1, n);
    std::nth_element(abs_values.begin(), abs_values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     abs_values.end(), std::greater<>());
    return abs_values[rank - 1];
}

}  // namespace

std::vector<bool> high_vol_mask(std::span<const double> y, HighVolRule rule) {
    std::vector<bool> mask(y.size(), false);
    if (y.empty()) return mask;
    std::vector<double> abs_y(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) abs_y[i] = std::abs(y[i]);

    if (rule == HighVolRule::hindsight) {
        const double threshold = top_decile_threshold(abs_y);
        for (std::size_t i = 0; i < y.size(); ++i) mask[i] = abs_y[i] >= threshold;
        return mask;
    }
    // expanding: rank step t against steps 0..t
    std::vector<double> seen;
    seen.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        seen.push_back(abs_y[i]);
        mask[i] = abs_y[i] >= top_decile_threshold(seen);
    }
    return mask;
}

StepRecord make_record(std::uint64_t t, double y, double center, double lower, double upper,
                       double alpha) {
    StepRecord r;
    r.t = t;
    r.y = y;
    r.center = center;
    r.lower = lower;
    r.upper = upper;
    r.covered = interval_covers(lower, upper, y);
    r.width = upper - lower;
    r.winkler = winkler(lower, upper, y, alpha);
    return r;
}

RunReport aggregate(std::span<const StepRecord> records, const std::vector<bool>& mask) {
    if (records.empty()) throw Error(ErrorCode::invalid_argument, "no records to aggregate");
    if (mask.size() != records.size()) throw Error(ErrorCode::invalid_argument, "mask length mismatch");
    RunReport rep;
    rep.n_steps = records.size();
    double covered = 0.0;
    double width = 0.0;
    double wink = 0.0;
    double hv_covered = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        covered += records[i].covered ? 1.0 : 0.0;
        width += records[i].width;
        wink += records[i].winkler;
        if (mask[i]) {
            ++rep.n_high_vol;
            hv_covered += records[i].covered ? 1.0 : 0.0;
        }
    }
    const auto n = static_cast<double>(records.size());
    rep.marginal_coverage = covered / n;
    rep.avg_width = width / n;
    rep.avg_winkler = wink / n;
    if (rep.n_high_vol > 0) rep.high_vol_coverage = hv_covered / static_cast<double>(rep.n_high_vol);
    return rep;
}

}  // namespace sabcp
