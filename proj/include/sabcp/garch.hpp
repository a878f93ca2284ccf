#pragma once

#include <cstddef>
#include <span>

namespace sabcp {

struct GarchForecast {
    double center = 0.0;
    double scale = 1.0;
};

/// GARCH(1,1) volatility filter with fixed coefficients and a zero
/// conditional mean: sigma2 <- omega + a r^2 + b sigma2.
class GarchModel {
public:
    static constexpr double kDefaultArch = 0.05;
    static constexpr double kDefaultGarch = 0.90;
    static constexpr double kVarianceFloor = 1e-12;
    static constexpr std::size_t kMinWarmup = 30;

    GarchModel(double omega, double a, double b, double sigma2);

    /// Variance targeting on a warmup window: omega = v (1 - a - b), sigma2 = v.
    static GarchModel from_warmup(std::span<const double> warmup, double a = kDefaultArch,
                                  double b = kDefaultGarch);

    /// Forecast for the next return, from the current state.
    GarchForecast forecast() const noexcept;
    void update(double r);
    /// forecast() then update(r).
    GarchForecast step(double r);

    double omega() const noexcept { return omega_; }
    double arch() const noexcept { return a_; }
    double garch() const noexcept { return b_; }
    double sigma2() const noexcept { return sigma2_; }

private:
    double omega_;
    double a_;
    double b_;
    double sigma2_;
};

}  // namespace sabcp
