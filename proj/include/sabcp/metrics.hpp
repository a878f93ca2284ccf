#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sabcp {

/// Interval score: width plus (2/alpha)-scaled distance of a miss.
double winkler(double lower, double upper, double y, double alpha);

enum class HighVolRule {
    hindsight,  // threshold from the whole evaluation window
    expanding,  // threshold from steps up to and including t
};

/// Marks steps whose |y| reaches the top-decile threshold. Ties at the
/// threshold are all marked.
std::vector<bool> high_vol_mask(std::span<const double> y, HighVolRule rule = HighVolRule::hindsight);

struct StepRecord {
    std::uint64_t t = 0;
    double y = 0.0;
    double center = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool covered = false;
    double width = 0.0;
    double winkler = 0.0;
    double q_hat = 0.0;
    double pi_s = 0.0;
    double d_s = 0.0;
    double lambda_t = 1.0;
    bool high_vol = false;
};

StepRecord make_record(std::uint64_t t, double y, double center, double lower, double upper,
                       double alpha);

struct RunReport {
    double marginal_coverage = 0.0;
    std::optional<double> high_vol_coverage;
    double avg_width = 0.0;
    double avg_winkler = 0.0;
    std::size_t n_steps = 0;
    std::size_t n_high_vol = 0;
};

/// Means over `records`; high-volatility coverage over the masked subset only.
RunReport aggregate(std::span<const StepRecord> records, const std::vector<bool>& mask);

}  // namespace sabcp
