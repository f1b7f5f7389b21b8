#include "coalab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "coalab/special_functions.hpp"

namespace coalab {

namespace {

constexpr double probability_tolerance = 1e-9;

double checked_probability(double value, const char* what) {
    if (!std::isfinite(value) || value < -probability_tolerance || value > 1.0 + probability_tolerance) {
        throw NumericInstability(std::string(what) + " left [0, 1]: " + std::to_string(value));
    }
    return std::clamp(value, 0.0, 1.0);
}

double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

int parity_sign(unsigned long a) { return a % 2 == 0 ? 1 : -1; }

} // namespace

TimePoint TimePoint::from_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::domain_error("time must be finite and nonnegative");
    }
    return {t, std::exp(-t)};
}

TimePoint TimePoint::from_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::domain_error("alpha must lie in (0, 1]");
    }
    return {-std::log(alpha), alpha};
}

double fixation_pgf(unsigned i, TimePoint tp, double z) {
    if (!(std::abs(z) < 1.0)) {
        throw std::domain_error("fixation_pgf requires |z| < 1");
    }
    return std::pow(1.0 - std::pow(1.0 - z, tp.alpha), static_cast<double>(i));
}

double fixation_transition(unsigned i, unsigned j, TimePoint tp, TransitionFormula formula) {
    if (i < 1 || j < 1) {
        throw std::out_of_range("fixation_transition: states are positive integers");
    }
    if (j < i) {
        return 0.0;
    }
    if (formula == TransitionFormula::stirling) {
        // alpha = a / b exactly; accumulate sum_k S(k,i) s(j,k) a^k b^{j-k} over b^j.
        const ExactRational alpha = exact_from_double(tp.alpha);
        const ExactInt& a = alpha.get_num();
        const ExactInt& b = alpha.get_den();
        std::vector<ExactInt> b_pow(j - i + 1);
        b_pow[0] = 1;
        for (unsigned m = 1; m < b_pow.size(); ++m) {
            b_pow[m] = b_pow[m - 1] * b;
        }
        ExactInt a_pow;
        mpz_pow_ui(a_pow.get_mpz_t(), a.get_mpz_t(), i);
        ExactInt sum = 0;
        for (unsigned k = i; k <= j; ++k) {
            sum += stirling_second(k, i) * stirling_first(j, k) * a_pow * b_pow[j - k];
            a_pow *= a;
        }
        ExactInt b_j;
        mpz_pow_ui(b_j.get_mpz_t(), b.get_mpz_t(), j);
        ExactRational p = make_rational(sum * factorial(i), b_j * factorial(j));
        if (parity_sign(i + j) < 0) {
            p = -p;
        }
        return checked_probability(p.get_d(), "stirling transition probability");
    }
    // Alternating sum in extended precision; the terms reach C(i, i/2) times
    // the result's scale.
    long double sum = 0.0L;
    long double choose = 1.0L;
    for (unsigned k = 1; k <= i; ++k) {
        choose = choose * (i - k + 1) / k;
        const long double z = static_cast<long double>(tp.alpha) * k;
        long double binom = 1.0L;
        for (unsigned m = 0; m < j; ++m) {
            binom *= (z - m) / (m + 1);
        }
        sum += parity_sign(k) * choose * binom;
    }
    return checked_probability(static_cast<double>(parity_sign(j) * sum), "binomial transition probability");
}

double fixation_marginal(TimePoint tp, unsigned j) {
    if (j < 1) {
        throw std::out_of_range("fixation_marginal: j >= 1");
    }
    if (tp.alpha == 1.0) {
        return j == 1 ? 1.0 : 0.0;
    }
    const double a = tp.alpha;
    return a * std::exp(log_gamma_diff(j - a, j + 1.0)) * reciprocal_gamma(1.0 - a);
}

double fixation_tail(TimePoint tp, unsigned j) {
    if (j <= 1) {
        return 1.0;
    }
    if (tp.alpha == 1.0) {
        return 0.0;
    }
    const double a = tp.alpha;
    return std::exp(log_gamma_diff(j - a, j)) * reciprocal_gamma(1.0 - a);
}

double reciprocal_factorial_moment(TimePoint tp, unsigned k) {
    if (k < 1) {
        throw std::out_of_range("reciprocal_factorial_moment: k >= 1");
    }
    double fact = 1.0;
    for (unsigned m = 2; m <= k; ++m) {
        fact *= m;
    }
    return tp.alpha / (fact * (tp.alpha + k));
}

double block_tail_via_duality(unsigned n, unsigned i, TimePoint tp) {
    if (i < 1 || n < 1) {
        throw std::out_of_range("block_tail_via_duality: states are positive integers");
    }
    if (i > n) {
        throw std::domain_error("block_tail_via_duality requires i <= n");
    }
    double sum = 0.0;
    for (unsigned k = 1; k <= i; ++k) {
        const double term = std::exp(log_binomial(i, k)) * general_binomial(tp.alpha * k - 1.0, n - 1);
        sum += parity_sign(k + n) * term;
    }
    return checked_probability(sum, "duality tail");
}

std::string_view to_string(HittingMethod method) {
    switch (method) {
    case HittingMethod::convolution:
        return "convolution";
    case HittingMethod::stirling_double:
        return "stirling-double";
    case HittingMethod::stirling_shift:
        return "stirling-shift";
    case HittingMethod::integral:
        return "integral";
    case HittingMethod::gf_series:
        return "gf-series";
    }
    return "unknown";
}

HittingMethod parse_hitting_method(std::string_view name) {
    for (auto m : {HittingMethod::convolution, HittingMethod::stirling_double, HittingMethod::stirling_shift,
                   HittingMethod::integral, HittingMethod::gf_series}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown hitting method '" + std::string(name) + "'");
}

namespace {

// sum_{k=1}^{m} P(eta_1 + ... + eta_k = m), P(eta = n) = 1/(n(n+1)).
ExactRational hitting_by_convolution(unsigned m) {
    if (m == 0) {
        return 1;
    }
    std::vector<ExactRational> step(m + 1);
    for (unsigned n = 1; n <= m; ++n) {
        step[n] = make_rational(1, static_cast<long>(n) * (n + 1));
    }
    std::vector<ExactRational> law = step;  // law of the k-fold sum on 0..m
    ExactRational total = law[m];
    for (unsigned k = 2; k <= m; ++k) {
        std::vector<ExactRational> next(m + 1);
        for (unsigned s = k; s <= m; ++s) {
            ExactRational acc = 0;
            for (unsigned a = k - 1; a < s; ++a) {
                acc += law[a] * step[s - a];
            }
            next[s] = std::move(acc);
        }
        law = std::move(next);
        total += law[m];
    }
    return total;
}

// (-1)^{i+j} (i!/(j-1)!) sum_{k=i}^{j} s(j,k) S(k,i) / k.
ExactRational hitting_by_stirling_double(unsigned i, unsigned j) {
    ExactRational sum = 0;
    for (unsigned k = i; k <= j; ++k) {
        sum += make_rational(stirling_first(j, k) * stirling_second(k, i), ExactInt(k));
    }
    ExactRational h = sum * make_rational(factorial(i), factorial(j - 1));
    return parity_sign(i + j) > 0 ? h : ExactRational(-h);
}

// (-1)^{j-i} (1/(j-i)!) sum_{k=1}^{j-i+1} s(j-i+1, k) / k.
ExactRational hitting_by_stirling_shift(unsigned m) {
    ExactRational sum = 0;
    for (unsigned k = 1; k <= m + 1; ++k) {
        sum += make_rational(stirling_first(m + 1, k), ExactInt(k));
    }
    ExactRational h = sum / ExactRational(factorial(m));
    return parity_sign(m) > 0 ? h : ExactRational(-h);
}

// Coefficients C[0..m] of 1 / B(z), where z B(z) = (1 - z)(-log(1 - z)).
std::vector<ExactRational> hitting_series(unsigned m) {
    const unsigned len = m + 1;
    std::vector<ExactRational> neg_log(len + 1);  // -log(1 - z) = sum z^k / k
    for (unsigned k = 1; k <= len; ++k) {
        neg_log[k] = make_rational(1, k);
    }
    std::vector<ExactRational> product(len + 1);  // times (1 - z)
    for (unsigned k = 0; k <= len; ++k) {
        product[k] = neg_log[k] - (k > 0 ? neg_log[k - 1] : ExactRational(0));
    }
    std::vector<ExactRational> b(len);  // divide by z
    for (unsigned k = 0; k < len; ++k) {
        b[k] = product[k + 1];
    }
    std::vector<ExactRational> c(len);
    c[0] = 1 / b[0];
    for (unsigned k = 1; k < len; ++k) {
        ExactRational acc = 0;
        for (unsigned l = 1; l <= k; ++l) {
            acc += b[l] * c[k - l];
        }
        c[k] = -acc / b[0];
    }
    return c;
}

} // namespace

ExactRational hitting_exact(unsigned i, unsigned j, HittingMethod method) {
    if (i < 1 || j < 1) {
        throw std::out_of_range("hitting probability: states are positive integers");
    }
    if (j < i) {
        return 0;
    }
    if (j == i) {
        return 1;
    }
    switch (method) {
    case HittingMethod::convolution:
        return hitting_by_convolution(j - i);
    case HittingMethod::stirling_double:
        return hitting_by_stirling_double(i, j);
    case HittingMethod::stirling_shift:
        return hitting_by_stirling_shift(j - i);
    default:
        throw std::invalid_argument("hitting method '" + std::string(to_string(method)) + "' is not exact");
    }
}

HittingValue hitting_probability(unsigned i, unsigned j, HittingMethod method) {
    if (i < 1 || j < 1) {
        throw std::out_of_range("hitting probability: states are positive integers");
    }
    switch (method) {
    case HittingMethod::integral:
        if (j < i) {
            return {0.0, std::nullopt};
        }
        return {hitting_integral(j - i), std::nullopt};
    case HittingMethod::gf_series:
        if (j < i) {
            return {0.0, std::nullopt};
        }
        return {hitting_gf_coefficients(i, j).back(), std::nullopt};
    default: {
        ExactRational h = hitting_exact(i, j, method);
        return {h.get_d(), std::move(h)};
    }
    }
}

std::vector<double> hitting_gf_coefficients(unsigned i, unsigned J) {
    if (i < 1 || J < i) {
        throw std::out_of_range("hitting_gf_coefficients requires 1 <= i <= J");
    }
    const auto series = hitting_series(J - i);
    std::vector<double> out;
    out.reserve(series.size());
    for (const auto& q : series) {
        out.push_back(q.get_d());
    }
    return out;
}

std::vector<double> hitting_renewal_table(unsigned m_max) {
    std::vector<double> h(m_max + 1, 0.0);
    h[0] = 1.0;
    for (unsigned m = 1; m <= m_max; ++m) {
        double acc = 0.0;
        for (unsigned k = 1; k <= m; ++k) {
            acc += h[m - k] / (static_cast<double>(k) * (k + 1.0));
        }
        h[m] = acc;
    }
    return h;
}

double hitting_integral(unsigned long m) {
    const double md = static_cast<double>(m);
    auto integrand = [md](double x) {
        if (x <= 0.0) {
            return 0.0;
        }
        return std::exp(log_gamma_diff(md + x, md + 1.0)) * reciprocal_gamma(x);
    };
    return boost::math::quadrature::gauss<double, 64>::integrate(integrand, 0.0, 1.0);
}

double hitting_asymptotic(double j) {
    if (!(j > 1.0)) {
        throw std::domain_error("hitting_asymptotic requires j > 1");
    }
    const double l = std::log(j);
    return 1.0 / l - euler_gamma / (l * l);
}

namespace {

// Same alternating sum with alpha taken exactly at its binary value.
double absorption_cdf_exact(unsigned long n, unsigned long i, double alpha) {
    // alpha = A / B; binom(j alpha - 1, n - 1) = prod_{m=1}^{n-1} (j A - m B) / (B^{n-1} (n-1)!).
    const ExactRational a = exact_from_double(alpha);
    const ExactInt& A = a.get_num();
    const ExactInt& B = a.get_den();
    ExactInt total = 0;
    for (unsigned long j = 1; j <= i; ++j) {
        const ExactInt jA = A * static_cast<unsigned long>(j);
        ExactInt prod = 1;
        ExactInt mB = 0;
        for (unsigned long m = 1; m < n; ++m) {
            mB += B;
            prod *= jA - mB;
        }
        prod *= binomial(static_cast<unsigned>(i), static_cast<unsigned>(j));
        if (parity_sign(n + j) > 0) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    ExactInt denom;
    mpz_pow_ui(denom.get_mpz_t(), B.get_mpz_t(), n - 1);
    denom *= factorial(static_cast<unsigned>(n - 1));
    return make_rational(total, denom).get_d();
}

} // namespace

double absorption_cdf(unsigned long n, unsigned long i, double t) {
    if (n < 1 || i < 1 || i > n) {
        throw std::domain_error("absorption_cdf requires 1 <= i <= n");
    }
    if (!(t > 0.0)) {
        throw std::domain_error("absorption_cdf requires t > 0");
    }
    if (n == 1 || i == n) {
        return 1.0;
    }
    const double alpha = std::exp(-t);
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    double magnitude = 0.0;
    for (unsigned long j = 1; j <= i; ++j) {
        const double z = alpha * static_cast<double>(j);
        const double rg = reciprocal_gamma(1.0 - z);
        if (rg == 0.0) {
            continue;
        }
        const double term =
            std::exp(log_binomial(static_cast<double>(i), static_cast<double>(j)) + log_gamma_diff(nd - z, nd)) * rg;
        sum += parity_sign(j - 1) * term;
        magnitude += std::abs(term);
    }
    const double rounding = magnitude * 4.0 * std::numeric_limits<double>::epsilon();
    if (rounding > 1e-12 && n <= 400) {
        return checked_probability(absorption_cdf_exact(n, i, alpha), "absorption cdf");
    }
    return checked_probability(sum, "absorption cdf");
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double gumbel_limit_cdf(unsigned long i, double x) {
    if (i < 1) {
        throw std::out_of_range("gumbel_limit_cdf requires i >= 1");
    }
    const double f = gumbel_cdf(x);
    if (f >= 1.0) {
        return 1.0;
    }
    return -std::expm1(static_cast<double>(i) * std::log1p(-f));
}

std::vector<double> gumbel_moments(unsigned K) {
    std::vector<double> m(K + 1, 0.0);
    m[0] = 1.0;
    for (unsigned n = 1; n <= K; ++n) {
        double acc = 0.0;
        double binom = 1.0;  // C(n-1, k-1)
        for (unsigned k = 1; k <= n; ++k) {
            acc += binom * gumbel_cumulant(k) * m[n - k];
            binom = binom * (n - k) / k;
        }
        m[n] = acc;
    }
    return m;
}

namespace {

// a_k = m_k / k!, the Taylor coefficients of Gamma(1 - x).
std::vector<double> gamma_series(unsigned K) {
    auto a = gumbel_moments(K);
    double fact = 1.0;
    for (unsigned k = 1; k <= K; ++k) {
        fact *= k;
        a[k] /= fact;
    }
    return a;
}

} // namespace

EdgeworthCoeffs edgeworth_c(unsigned K) {
    if (K > edgeworth_max_order) {
        throw std::out_of_range("edgeworth order K must be <= 12");
    }
    const auto a = gamma_series(K);
    EdgeworthCoeffs out{K, std::vector<double>(K + 1, 0.0)};
    out.c[0] = 1.0;
    // power[k] = sum over compositions k_1 + ... + k_j = k of a_{k_1} ... a_{k_j}
    std::vector<double> power(K + 1, 0.0);
    for (unsigned k = 1; k <= K; ++k) {
        power[k] = a[k];
    }
    for (unsigned j = 1; j <= K; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        for (unsigned k = j; k <= K; ++k) {
            out.c[k] += sign * power[k];
        }
        std::vector<double> next(K + 1, 0.0);
        for (unsigned k = j + 1; k <= K; ++k) {
            for (unsigned l = 1; l + j <= k; ++l) {
                next[k] += a[l] * power[k - l];
            }
        }
        power = std::move(next);
    }
    return out;
}

std::vector<double> edgeworth_c_by_inversion(unsigned K) {
    const auto a = gamma_series(K);
    std::vector<double> c(K + 1, 0.0);
    c[0] = 1.0;
    for (unsigned k = 1; k <= K; ++k) {
        double acc = 0.0;
        for (unsigned l = 1; l <= k; ++l) {
            acc += a[l] * c[k - l];
        }
        c[k] = -acc;
    }
    return c;
}

double edgeworth_d(unsigned k, unsigned long i, double x) {
    const double f = gumbel_cdf(x);
    double sum = 0.0;
    for (unsigned long j = 1; j <= i; ++j) {
        const double jd = static_cast<double>(j);
        const double term = std::exp(log_binomial(static_cast<double>(i), jd)) * std::pow(f, jd) * std::pow(jd, k);
        sum += parity_sign(j - 1) * term;
    }
    return sum;
}

double edgeworth_d_stirling(unsigned k, unsigned long i, double x) {
    if (k == 0) {
        return gumbel_limit_cdf(i, x);
    }
    const double f = gumbel_cdf(x);
    double sum = 0.0;
    double falling = 1.0;  // (i)_j
    for (unsigned j = 1; j <= k && j <= i; ++j) {
        falling *= static_cast<double>(i - j + 1);
        const double term = stirling_second(k, j).get_d() * falling * std::pow(f, j) *
                            std::pow(1.0 - f, static_cast<double>(i - j));
        sum += parity_sign(j - 1) * term;
    }
    return sum;
}

double edgeworth_cdf(unsigned long n, unsigned long i, double x, unsigned K) {
    if (n < 3) {
        throw std::domain_error("edgeworth_cdf requires n >= 3");
    }
    const auto coeffs = edgeworth_c(K);
    const double scale = std::exp(-x) / std::log(static_cast<double>(n));
    double sum = 0.0;
    double power = 1.0;
    for (unsigned k = 0; k <= K; ++k) {
        sum += coeffs.c[k] * edgeworth_d(k, i, x) * power;
        power *= scale;
    }
    return sum;
}

} // namespace coalab
