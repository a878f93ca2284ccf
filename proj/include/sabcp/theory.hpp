#pragma once

namespace sabcp {

/// Inputs of the closed-form mixture risk.
struct RiskParams {
    double d_s;  // spatial evidence
    double v0;   // irreducible spatial variance
    double m_t;  // squared structural bias of the temporal base
};

/// (D v0 + K^2 m_t) / (D + K)^2.
double mixture_mse(const RiskParams& p, double k);

/// Minimizer of mixture_mse in K: v0 / m_t.
double optimal_k(double v0, double m_t);

}  // namespace sabcp
