#pragma once

// Marginal laws of the two limit processes: the Mittag-Leffler process X
// (limit of the scaled block counting process) and Neveu's continuous-state
// branching process Y (limit of the scaled fixation line).

#include <vector>

#include "coalab/analytics.hpp"
#include "coalab/random.hpp"

namespace coalab {

/// E X_t^m = Gamma(1 + m) / Gamma(1 + m alpha). Throws std::domain_error for m < 0.
double ml_moment(TimePoint tp, double m);

/// E exp(-lambda Y_t) = exp(-lambda^alpha).
double neveu_laplace(TimePoint tp, double lambda);

/// One draw of the positive alpha-stable law with Laplace transform
/// exp(-lambda^alpha) by Kanter's representation
///   S = sin(a pi U) sin((1-a) pi U)^{(1-a)/a} / (sin(pi U)^{1/a} E^{(1-a)/a}),
/// U uniform, E standard exponential. alpha = 1 gives the constant 1.
double sample_neveu(TimePoint tp, RandomStream& rng);

/// One Mittag-Leffler draw, S^{-alpha} with S from sample_neveu.
double sample_mittag_leffler(TimePoint tp, RandomStream& rng);

/// Joint Laplace transform E exp(-sum_k lambda_k Y_{t_k}) of Y started at 1,
/// via psi_k(..., l_{k-1}, l_k) = psi_{k-1}(..., l_{k-1} + l_k^{a_k / a_{k-1}}),
/// psi_1(l) = exp(-l^{a_1}), a_j = exp(-t_j).
/// Throws std::domain_error unless the times strictly increase, are
/// nonnegative, the lambdas are nonnegative and both sequences have the same
/// nonzero length.
double neveu_laplace_fd(const std::vector<double>& times, const std::vector<double>& lambdas);

/// X-tilde_t = log X_t and Y-tilde_t = log Y_t.
enum class LogProcess { x_tilde, y_tilde };

struct LogMarginalSpec {
    LogProcess which;
    double t;
};

/// j-th cumulant: (exp(j t) - 1) kappa_j(G) for Y-tilde and
/// (-1)^j (1 - exp(-j t)) kappa_j(G) for X-tilde, G standard Gumbel.
/// Valid for 1 <= j <= 12.
double log_cumulant(LogMarginalSpec spec, unsigned j);

struct DualityGap {
    EstimateWithError block_side;      // P(x^alpha X_t <= y)
    EstimateWithError branching_side;  // P(y^{1/alpha} Y_t >= x)
    double gap = 0.0;
    double std_error = 0.0;            // combined, the two sides are independent
};

/// Monte Carlo estimate of P(X_t <= y | X_0 = x) - P(Y_t >= x | Y_0 = y).
/// The two probabilities are estimated from disjoint draws of rng.
DualityGap siegmund_duality_gap(double x, double y, double t, unsigned long reps, RandomStream& rng);

/// (1 - e^{-x})^alpha >= 1 - e^{-x^alpha} up to 1e-12. Requires x >= 0 and
/// alpha in [0, 1].
bool check_pow_inequality(double x, double alpha);

} // namespace coalab
