#include "sabcp/theory.hpp"

#include <cmath>

#include "sabcp/core.hpp"

namespace sabcp {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::invalid_argument, std::string(what) + " must be positive and finite");
    }
}

}  // namespace

double mixture_mse(const RiskParams& p, double k) {
    require_positive(p.d_s, "d_s");
    require_positive(p.v0, "v0");
    require_positive(p.m_t, "m_t");
    require_positive(k, "k");
    const double denom = p.d_s + k;
    return (p.d_s * p.v0 + k * k * p.m_t) / (denom * denom);
}

double optimal_k(double v0, double m_t) {
    require_positive(v0, "v0");
    require_positive(m_t, "m_t");
    return v0 / m_t;
}

}  // namespace sabcp
