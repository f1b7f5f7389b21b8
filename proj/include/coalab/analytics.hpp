#pragma once

// Closed-form functionals of L and N for the Beta(1,1) coalescent:
// transition and hitting probabilities, absorption-time laws, and Gumbel and
// Edgeworth approximations of the latter.

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "coalab/combinatorics.hpp"

namespace coalab {

/// Coalescent time t together with alpha = exp(-t).
struct TimePoint {
    double t = 0.0;
    double alpha = 1.0;

    static TimePoint from_time(double t);
    /// alpha in (0, 1]; t is recomputed as -log(alpha).
    static TimePoint from_alpha(double alpha);
};

/// A formula evaluated in floating point drifted outside its valid range.
class NumericInstability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// E z^{L_t} for L_0 = i: (1 - (1 - z)^alpha)^i. Requires |z| < 1.
double fixation_pgf(unsigned i, TimePoint tp, double z);

enum class TransitionFormula { stirling, binomial };

/// p_ij(t) = P(L_t = j | L_0 = i).
///
/// stirling: (-1)^{i+j} (i!/j!) sum_k S(k, i) alpha^k s(j, k), evaluated in
///   exact rational arithmetic at the binary value of alpha, so it is free of
///   cancellation; needs j <= stirling_nmax().
/// binomial: (-1)^j sum_{k=1}^{i} (-1)^k C(i, k) binom(alpha k, j).
///
/// Returns 0 for j < i. Throws NumericInstability if the floating-point
/// result leaves [-1e-9, 1 + 1e-9].
double fixation_transition(unsigned i, unsigned j, TimePoint tp,
                           TransitionFormula formula = TransitionFormula::stirling);

/// P(L_t = j | L_0 = 1) = alpha Gamma(j - alpha) / (Gamma(1 - alpha) Gamma(j + 1)).
double fixation_marginal(TimePoint tp, unsigned j);

/// P(L_t >= j | L_0 = 1) = Gamma(j - alpha) / (Gamma(1 - alpha) Gamma(j)).
double fixation_tail(TimePoint tp, unsigned j);

/// E[1 / ((L_t + 1) ... (L_t + k))] = alpha / (k! (alpha + k)).
double reciprocal_factorial_moment(TimePoint tp, unsigned k);

/// P(N_t^{(n)} <= i) = P(L_t^{(i)} >= n) through the closed-form tail sum
/// sum_{k=1}^{i} (-1)^{k+n} C(i, k) binom(alpha k - 1, n - 1).
double block_tail_via_duality(unsigned n, unsigned i, TimePoint tp);

enum class HittingMethod { convolution, stirling_double, stirling_shift, integral, gf_series };

std::string_view to_string(HittingMethod method);
/// Accepts "convolution", "stirling-double", "stirling-shift", "integral", "gf-series".
HittingMethod parse_hitting_method(std::string_view name);

struct HittingValue {
    double value = 0.0;
    std::optional<ExactRational> exact;  // set by the rational methods
};

/// Probability h(i, j) that the fixation line started at i ever visits j.
/// h(i, j) = h(1, j - i + 1); 0 for j < i and 1 for j = i.
HittingValue hitting_probability(unsigned i, unsigned j, HittingMethod method);

/// h(i, j) as an exact rational by one of the three rational methods.
/// Throws std::invalid_argument for the floating-point methods.
ExactRational hitting_exact(unsigned i, unsigned j, HittingMethod method);

/// Coefficients of z^{j-1}, j = i..J, of z^i / ((1 - z)(-log(1 - z))).
std::vector<double> hitting_gf_coefficients(unsigned i, unsigned J);

/// h(1, m + 1) for m = 0..m_max from the renewal recursion
/// h_m = sum_{k=1}^{m} h_{m-k} / (k (k + 1)) in double precision.
std::vector<double> hitting_renewal_table(unsigned m_max);

/// h(1, m + 1) = (1/m!) int_0^1 Gamma(m + x) / Gamma(x) dx by 64-point
/// Gauss-Legendre quadrature; usable for very large m.
double hitting_integral(unsigned long m);

/// 1/log j - gamma/log^2 j. Requires j > 1.
double hitting_asymptotic(double j);

/// P(tau_{n,i} <= t): distribution of the first time the block counting
/// process started from n reaches a state <= i. Evaluated through
/// Gamma(n - j alpha) / (Gamma(n) Gamma(1 - j alpha)); ill-conditioned
/// alternating sums with n <= 400 are redone in exact arithmetic.
double absorption_cdf(unsigned long n, unsigned long i, double t);

/// Standard Gumbel distribution function exp(-exp(-x)).
double gumbel_cdf(double x);
/// Distribution function of the minimum of i independent standard Gumbel
/// variables: 1 - (1 - F(x))^i.
double gumbel_limit_cdf(unsigned long i, double x);

inline constexpr unsigned edgeworth_max_order = 12;

struct EdgeworthCoeffs {
    unsigned K = 0;
    std::vector<double> c;  // c[0..K]
};

/// Raw moments m_0..m_K of the standard Gumbel law from its cumulants.
std::vector<double> gumbel_moments(unsigned K);

/// Taylor coefficients of 1/Gamma(1 - x) through the composition sum over
/// Gumbel moments. Throws std::out_of_range for K > 12.
EdgeworthCoeffs edgeworth_c(unsigned K);

/// Same coefficients by reciprocal power-series recursion of Gamma(1 - x).
std::vector<double> edgeworth_c_by_inversion(unsigned K);

/// d_ki(x) = sum_{j=1}^{i} F(x)^j (-1)^{j-1} C(i, j) j^k.
double edgeworth_d(unsigned k, unsigned long i, double x);
/// The same quantity as a Stirling-number sum over falling factorials.
double edgeworth_d_stirling(unsigned k, unsigned long i, double x);

/// Order-K expansion of P(tau_{n,i} - log log n <= x). Requires n >= 3.
double edgeworth_cdf(unsigned long n, unsigned long i, double x, unsigned K);

} // namespace coalab
