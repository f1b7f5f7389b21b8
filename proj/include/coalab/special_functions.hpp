#pragma once

#include <numbers>

namespace coalab {

inline constexpr double euler_gamma = std::numbers::egamma;

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// ln Gamma(x) - ln Gamma(y) for x, y > 0, without the cancellation of the
/// naive difference when both arguments are large.
double log_gamma_diff(double x, double y);

/// 1 / Gamma(x) for any real x; zero at the poles 0, -1, -2, ...
double reciprocal_gamma(double x);

/// Generalized binomial coefficient z (z-1) ... (z-j+1) / j!.
/// Direct product for j <= 64, signed log-gamma form above.
double general_binomial(double z, unsigned j);

/// Riemann zeta at integer arguments 2..12.
double zeta_int(unsigned j);

/// Cumulants of the standard Gumbel law: kappa_1 = gamma,
/// kappa_j = (j-1)! zeta(j) for 2 <= j <= 12.
double gumbel_cumulant(unsigned j);

} // namespace coalab
