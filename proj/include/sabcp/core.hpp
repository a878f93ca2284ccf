#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sabcp {

enum class ErrorCode {
    invalid_argument,
    invalid_config,
    out_of_order,
    io,
    parse,
    insufficient_data,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class ScoreMode { absolute, scaled };

std::string_view to_string(ScoreMode mode) noexcept;
std::optional<ScoreMode> parse_score_mode(std::string_view text) noexcept;

struct SabcpConfig {
    double alpha = 0.1;
    double beta = 0.99;
    double k = 1.0;
    double r_max = 10.0;
    std::size_t state_dim = 1;
    std::optional<std::size_t> history_cap;
    ScoreMode score_mode = ScoreMode::scaled;
    double bandwidth_floor = 1e-8;
    double solver_tol = 1e-9;
    int solver_max_iter = 200;
};

struct ConfigIssue {
    std::string field;
    std::string message;
};

/// Every violated field of `cfg`; empty when the config is usable.
std::vector<ConfigIssue> config_issues(const SabcpConfig& cfg);

/// Returns `cfg` unchanged or throws Error(invalid_config) listing each issue.
const SabcpConfig& validate_config(const SabcpConfig& cfg);

struct Observation {
    std::uint64_t t = 0;
    double y = 0.0;
    std::vector<double> features;
};

/// Symmetric interval around the base forecast. `margin` is the half-width on
/// the target scale; `q_hat` is the score quantile it was built from.
struct IntervalForecast {
    double center = 0.0;
    double margin = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double q_hat = 0.0;
    double pi_s = 0.0;
    double d_s = 0.0;
    double lambda_t = 1.0;
};

/// Everything a method may look at when forecasting step t: the base model's
/// output and the spatial state, all computed before y_t is revealed.
struct StepInput {
    std::uint64_t t = 0;
    double center = 0.0;
    double scale = 1.0;
    std::span<const double> state;
    bool state_valid = true;
};

double nonconformity_score(double y, double center, double scale, ScoreMode mode);

/// Half-width on the target scale for a score quantile.
double interval_half_width(double q_hat, double scale, ScoreMode mode) noexcept;

/// Closed interval membership used by every method and metric.
bool interval_covers(double lower, double upper, double y) noexcept;

/// Predict-then-update state machine shared by all conformal methods.
///
/// forecast() may be called once per step and must be followed by observe()
/// before the next forecast. Step indices must increase by exactly one.
class Predictor {
public:
    explicit Predictor(ScoreMode mode) : mode_(mode) {}
    virtual ~Predictor() = default;

    Predictor(const Predictor&) = default;
    Predictor& operator=(const Predictor&) = default;
    Predictor(Predictor&&) = default;
    Predictor& operator=(Predictor&&) = default;

    IntervalForecast forecast(const StepInput& input);
    void observe(double y);

    virtual std::string_view name() const noexcept = 0;

    ScoreMode score_mode() const noexcept { return mode_; }
    std::uint64_t steps_observed() const noexcept { return observed_; }
    bool awaiting_observation() const noexcept { return pending_.has_value(); }

    /// Throws if `t` cannot be the next step index.
    void check_next_step(std::uint64_t t) const;

protected:
    struct Margin {
        double q_hat = 0.0;
        double pi_s = 0.0;
        double d_s = 0.0;
        double lambda_t = 1.0;
    };

    virtual Margin predict_margin(const StepInput& input) = 0;
    /// Called with the revealed score and the interval emitted for this step.
    virtual void ingest(double score, double y, const IntervalForecast& emitted) = 0;

    /// State vector of the step awaiting its observation.
    std::span<const double> pending_state() const noexcept { return pending_state_; }
    bool pending_state_valid() const noexcept { return pending_state_valid_; }
    double pending_scale() const noexcept { return pending_scale_; }

private:
    ScoreMode mode_;
    std::uint64_t observed_ = 0;
    std::optional<std::uint64_t> last_t_;
    std::optional<IntervalForecast> pending_;
    std::vector<double> pending_state_;
    bool pending_state_valid_ = false;
    double pending_scale_ = 1.0;
};

/// One full protocol step. Rejects non-finite y and bad step indices before
/// touching the predictor, so a rejected step leaves it unchanged.
IntervalForecast stream_step(Predictor& predictor, const StepInput& input, double y);

}  // namespace sabcp
