#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sabcp/core.hpp"
#include "sabcp/spatial_kde.hpp"
#include "sabcp/temporal_cdf.hpp"

namespace sabcp {

/// Evidence gate D / (D + K).
double spatial_proportion(double d_s, double k);

/// Uniform-prior weight 1/sqrt(1 + t).
double prior_weight(std::uint64_t t);

/// Scores with (unnormalized) weights, aligned index by index.
struct WeightedScores {
    std::span<const double> scores;
    std::span<const double> weights;
};

/// Inputs of the mixture CDF for one step. A component with pi weight zero is
/// never evaluated and may be left empty.
struct MixtureQuery {
    double pi_s = 0.0;
    double lambda_t = 1.0;
    double r_max = 1.0;
    WeightedScores spatial;
    WeightedScores temporal;

    /// max(R, largest score in either component).
    double search_upper() const;
};

/// (1-lambda)[pi_s F_S(r) + (1-pi_s) F_T(r)] + lambda min(r/R, 1), by direct
/// summation. The bracketed term is 0 when the temporal component is empty.
double mixture_cdf(const MixtureQuery& q, double r);

struct SolverOptions {
    double tol = 1e-9;  // relative to the search upper bound
    int max_iter = 200;
};

/// Smallest q in [0, upper] with cdf(q) >= level, by bisection. Returns
/// `upper` if cdf(upper) < level.
template <class Cdf>
double bisect_quantile(const Cdf& cdf, double upper, double level, SolverOptions opts) {
    if (cdf(0.0) >= level) return 0.0;
    if (cdf(upper) < level) return upper;
    double lo = 0.0;
    double hi = upper;
    const double width_tol = opts.tol * upper;
    for (int it = 0; it < opts.max_iter && hi - lo > width_tol; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) >= level) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// Quantile of the mixture at level 1 - alpha over [0, search_upper()].
double solve_quantile(const MixtureQuery& q, double alpha, SolverOptions opts = {});

/// SA-BCP: discounted temporal CDF gated against kernel-density spatial memory.
/// With `temporal_only` the gate is pinned at zero, which is discounted BCP.
class SabcpEngine final : public Predictor {
public:
    explicit SabcpEngine(const SabcpConfig& cfg, bool temporal_only = false);

    std::string_view name() const noexcept override { return temporal_only_ ? "bcp" : "sabcp"; }

    const SabcpConfig& config() const noexcept { return cfg_; }
    const TemporalArchive& temporal() const noexcept { return temporal_; }
    const SpatialArchive& spatial() const noexcept { return spatial_; }
    const OnlineMoments& moments() const noexcept { return moments_; }

    /// Mixture query the engine would solve for `input` (test hook; does not
    /// change state). Storage for the weights is owned by the engine.
    MixtureQuery query_for(const StepInput& input);

protected:
    Margin predict_margin(const StepInput& input) override;
    void ingest(double score, double y, const IntervalForecast& emitted) override;

private:
    struct Ranked {
        double score;
        std::uint64_t seq;          // arrival index among all ingested steps
        std::int64_t spatial_seq;   // arrival index in the spatial archive, -1 if none
    };

    void gate(const StepInput& input, double& pi_s, double& d_s);
    void drop_oldest();

    SabcpConfig cfg_;
    bool temporal_only_;
    TemporalArchive temporal_;
    SpatialArchive spatial_;
    OnlineMoments moments_;
    std::vector<Ranked> ranked_;
    std::uint64_t ingested_ = 0;
    std::uint64_t spatial_pushed_ = 0;

    // per-step scratch
    std::vector<double> h_;
    std::vector<double> kernel_;
    std::vector<double> temporal_w_;
    std::vector<double> cumulative_;
    std::vector<double> sorted_;
};

}  // namespace sabcp
