#include "sabcp/garch.hpp"

#include <algorithm>
#include <cmath>

#include "sabcp/core.hpp"

namespace sabcp {

GarchModel::GarchModel(double omega, double a, double b, double sigma2)
    : omega_(omega), a_(a), b_(b), sigma2_(std::max(sigma2, kVarianceFloor)) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorCode::invalid_argument, "GARCH omega must be positive");
    }
    if (!(a >= 0.0) || !(b >= 0.0) || !(a + b < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "GARCH needs a, b >= 0 and a + b < 1");
    }
}

GarchModel GarchModel::from_warmup(std::span<const double> warmup, double a, double b) {
    if (warmup.size() < kMinWarmup) {
        throw Error(ErrorCode::insufficient_data, "GARCH warmup needs at least 30 returns");
    }
    if (!(a >= 0.0) || !(b >= 0.0) || !(a + b < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "GARCH needs a, b >= 0 and a + b < 1");
    }
    double mean = 0.0;
    for (double r : warmup) mean += r;
    mean /= static_cast<double>(warmup.size());
    double ss = 0.0;
    for (double r : warmup) ss += (r - mean) * (r - mean);
    const double var = ss / static_cast<double>(warmup.size() - 1);
    if (!(var > kVarianceFloor) || !std::isfinite(var)) {
        throw Error(ErrorCode::insufficient_data, "GARCH warmup has degenerate variance");
    }
    return GarchModel(var * (1.0 - a - b), a, b, var);
}

GarchForecast GarchModel::forecast() const noexcept { return {0.0, std::sqrt(sigma2_)}; }

void GarchModel::update(double r) {
    if (!std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "GARCH input is not finite");
    sigma2_ = std::max(omega_ + a_ * r * r + b_ * sigma2_, kVarianceFloor);
}

GarchForecast GarchModel::step(double r) {
    const GarchForecast f = forecast();
    update(r);
    return f;
}

}  // namespace sabcp
