#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "sabcp/core.hpp"

namespace sabcp {

inline constexpr double kAlphaFloor = 1e-3;
inline constexpr double kAlphaCeil = 1.0 - 1e-3;
inline constexpr std::size_t kDefaultCalibrationWindow = 250;

/// Default ACI expert step sizes.
std::vector<double> default_gamma_grid();

/// Exponential-weights rate sqrt(8 ln(n) / horizon).
double default_aggregation_rate(std::size_t n_experts, double horizon = 2500.0);

/// Pinball loss of `margin` against `score` at quantile level `tau`.
double pinball_loss(double margin, double score, double tau);

/// Bounded FIFO of recent scores.
class CalibrationWindow {
public:
    explicit CalibrationWindow(std::size_t capacity = kDefaultCalibrationWindow);

    void push(double score);
    std::size_t size() const noexcept { return scores_.size(); }
    bool empty() const noexcept { return scores_.empty(); }
    double max() const;

    /// Smallest element with rank >= ceil(level * n) (higher interpolation).
    double quantile(double level) const;

private:
    std::size_t capacity_;
    std::deque<double> scores_;
};

struct AciState {
    double alpha_t;
    double gamma;
};

/// alpha_t + gamma (alpha - err), clamped to [kAlphaFloor, kAlphaCeil].
double aci_next_alpha(double alpha_t, double gamma, double alpha, bool missed);

/// Margin at level 1 - alpha_t, or the conservative bound max(R, window max)
/// when the window is empty or alpha_t sits at the floor.
double aci_margin(const CalibrationWindow& window, double alpha_t, double r_max);

struct BaselineOptions {
    std::size_t window = kDefaultCalibrationWindow;
    double gamma = 0.01;                 // single-expert ACI
    std::vector<double> gamma_grid;      // empty: default_gamma_grid()
    double eta = 0.0;                    // <= 0: default_aggregation_rate
};

class AciPredictor final : public Predictor {
public:
    AciPredictor(const SabcpConfig& cfg, const BaselineOptions& opts = {});

    std::string_view name() const noexcept override { return "aci"; }
    const AciState& state() const noexcept { return state_; }
    const CalibrationWindow& window() const noexcept { return window_; }

protected:
    Margin predict_margin(const StepInput& input) override;
    void ingest(double score, double y, const IntervalForecast& emitted) override;

private:
    double alpha_;
    double r_max_;
    AciState state_;
    CalibrationWindow window_;
};

/// Shared machinery of the two aggregated ACI variants.
class ExpertEnsemble {
public:
    ExpertEnsemble(double alpha, std::span<const double> gammas, double eta);

    std::size_t size() const noexcept { return experts_.size(); }
    const std::vector<AciState>& experts() const noexcept { return experts_; }
    std::vector<double> weights() const;
    double eta() const noexcept { return eta_; }

    /// Multiplies each weight by exp(-eta * loss_i) and renormalizes.
    void reweight(std::span<const double> losses);

    double weighted_average(std::span<const double> values) const;

    /// Per-expert ACI update from each expert's own coverage outcome.
    void update_alphas(const std::vector<bool>& missed);

private:
    double alpha_;
    double eta_;
    std::vector<AciState> experts_;
    std::vector<double> log_weights_;
};

/// Aggregates expert margins.
class AgAciPredictor final : public Predictor {
public:
    AgAciPredictor(const SabcpConfig& cfg, const BaselineOptions& opts = {});

    std::string_view name() const noexcept override { return "agaci"; }
    const ExpertEnsemble& ensemble() const noexcept { return ensemble_; }

protected:
    Margin predict_margin(const StepInput& input) override;
    void ingest(double score, double y, const IntervalForecast& emitted) override;

private:
    double alpha_;
    double r_max_;
    ExpertEnsemble ensemble_;
    CalibrationWindow window_;
    std::vector<double> margins_;
};

/// Aggregates expert miscoverage levels and reads one quantile.
class DtAciPredictor final : public Predictor {
public:
    DtAciPredictor(const SabcpConfig& cfg, const BaselineOptions& opts = {});

    std::string_view name() const noexcept override { return "dtaci"; }
    const ExpertEnsemble& ensemble() const noexcept { return ensemble_; }

protected:
    Margin predict_margin(const StepInput& input) override;
    void ingest(double score, double y, const IntervalForecast& emitted) override;

private:
    double alpha_;
    double r_max_;
    ExpertEnsemble ensemble_;
    CalibrationWindow window_;
    std::vector<double> margins_;
};

}  // namespace sabcp
