#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sabcp/spatial_kde.hpp"

namespace sabcp {

struct RegimeParams {
    double x_mean;
    double x_sd;
    double y_mean;
    double y_sd;
};

/// Two-regime stream: a stable state interrupted by fixed-length shocks.
struct SyntheticSpec {
    std::size_t total_steps = 900;
    std::vector<std::size_t> shock_starts{200, 450, 700};
    std::size_t shock_len = 30;
    std::uint64_t seed = 0;
    RegimeParams normal{1.0, 0.1, 0.0, 0.5};
    RegimeParams shock{3.0, 0.1, 3.0, 0.5};
};

struct SyntheticStream {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<bool> shock;

    std::size_t size() const noexcept { return y.size(); }
};

/// Throws Error(invalid_argument) on out-of-range or overlapping shocks.
void validate_synthetic_spec(const SyntheticSpec& spec);

SyntheticStream synth_stream(const SyntheticSpec& spec);

/// Daily closes and their percent log-returns, r_t = 100 ln(P_t / P_{t-1}).
/// returns[i] and return_dates[i] belong to close i + 1.
struct ReturnSeries {
    std::string asset;
    std::vector<std::string> dates;
    std::vector<double> closes;
    std::vector<double> returns;
    std::size_t dropped_rows = 0;

    std::string_view return_date(std::size_t i) const { return dates.at(i + 1); }
};

inline constexpr std::size_t kMinPriceRows = 300;

/// Parses a `date,close` CSV (extra columns ignored). Rows are sorted by date;
/// duplicate dates are rejected; rows with non-positive or missing closes are
/// dropped and counted.
ReturnSeries parse_prices(std::istream& in, std::string asset, std::size_t min_rows = kMinPriceRows);
ReturnSeries load_prices(const std::filesystem::path& path, std::string asset = {},
                         std::size_t min_rows = kMinPriceRows);

/// Writes the cleaned closes back as `date,close`.
void write_prices(std::ostream& out, const ReturnSeries& series);

ReturnSeries series_from_closes(std::string asset, std::vector<std::string> dates,
                                std::vector<double> closes);

struct SpatialState {
    std::vector<double> values;
    bool cold = true;
};

/// Normalized lagged absolute returns. Feed returns with push(); build()
/// describes the state for the step after the last pushed return.
class StateBuilder {
public:
    explicit StateBuilder(std::size_t dim);

    void push(double r);
    SpatialState build() const;

    std::size_t dim() const noexcept { return dim_; }
    const OnlineMoments& moments() const noexcept { return moments_; }

private:
    std::size_t dim_;
    OnlineMoments moments_;
    std::vector<double> recent_;  // |r|, newest last, at most dim_
};

/// Standalone form: s_j = (|r_{t-j}| - mean) / max(sd, 1e-8).
SpatialState build_state(std::span<const double> window_newest_first, const OnlineMoments& moments);

}  // namespace sabcp
