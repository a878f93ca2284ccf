#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "sabcp/baselines.hpp"
#include "sabcp/core.hpp"
#include "sabcp/data.hpp"
#include "sabcp/garch.hpp"
#include "sabcp/metrics.hpp"

namespace sabcp {

enum class Method { sabcp, bcp, aci, agaci, dtaci };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;

std::unique_ptr<Predictor> make_predictor(Method m, const SabcpConfig& cfg,
                                          const BaselineOptions& opts = {});

struct RunOptions {
    std::size_t warmup = 250;
    double garch_a = GarchModel::kDefaultArch;
    double garch_b = GarchModel::kDefaultGarch;
    /// Use 10x the standard deviation of the warmup scores as R.
    bool auto_r_max = true;
    HighVolRule high_vol = HighVolRule::hindsight;
    BaselineOptions baselines;
};

inline constexpr double kAutoRMaxFactor = 10.0;

struct CellResult {
    std::vector<StepRecord> records;
    RunReport report;
    double r_max = 0.0;
};

/// Return-stream cell: GARCH warmup on the first `warmup` returns, then
/// predict-then-update over the rest, which is the evaluation window.
CellResult run_returns(const ReturnSeries& series, Method m, SabcpConfig cfg,
                       const RunOptions& opts = {});

/// Synthetic cell: zero-center base, unit scale, state = x_t, whole stream evaluated.
CellResult run_synthetic(const SyntheticStream& stream, Method m, SabcpConfig cfg,
                         const RunOptions& opts = {});

}  // namespace sabcp
