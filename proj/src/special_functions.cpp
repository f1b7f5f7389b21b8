#include "coalab/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

namespace coalab {

namespace {

constexpr double pi = std::numbers::pi;

// Stirling series remainder ln Gamma(z) - [(z - 1/2) ln z - z + ln(2 pi)/2].
double stirling_tail(double z) {
    const double r = 1.0 / z;
    const double r2 = r * r;
    return r * (1.0 / 12.0 +
                r2 * (-1.0 / 360.0 +
                      r2 * (1.0 / 1260.0 + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0)))));
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive, got " + std::to_string(x));
    }
    return boost::math::lgamma(x);
}

double log_gamma_diff(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw std::domain_error("log_gamma_diff: arguments must be positive");
    }
    if (x == y) {
        return 0.0;
    }
    if (std::min(x, y) < 20.0) {
        return boost::math::lgamma(x) - boost::math::lgamma(y);
    }
    const double d = x - y;
    // (x - 1/2) ln x - (y - 1/2) ln y - d, rearranged around ln y.
    const double main = (x - 0.5) * std::log1p(d / y) + d * std::log(y) - d;
    return main + stirling_tail(x) - stirling_tail(y);
}

double reciprocal_gamma(double x) {
    if (x > 0.0) {
        if (x < 170.0) {
            return 1.0 / boost::math::tgamma(x);
        }
        return std::exp(-boost::math::lgamma(x));
    }
    if (is_nonpositive_integer(x)) {
        return 0.0;
    }
    // Reflection: 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi.
    const double s = boost::math::sin_pi(x);
    const double one_minus = 1.0 - x;
    if (one_minus < 170.0) {
        return boost::math::tgamma(one_minus) * s / pi;
    }
    const double magnitude = std::exp(boost::math::lgamma(one_minus) + std::log(std::abs(s)) - std::log(pi));
    return s < 0.0 ? -magnitude : magnitude;
}

double general_binomial(double z, unsigned j) {
    if (j == 0) {
        return 1.0;
    }
    if (j <= 64) {
        double value = 1.0;
        for (unsigned m = 0; m < j; ++m) {
            value *= (z - m) / (m + 1);
        }
        return value;
    }
    const double jd = static_cast<double>(j);
    if (z >= 0.0 && z == std::floor(z)) {
        if (z < jd) {
            return 0.0;
        }
        return std::exp(boost::math::lgamma(z + 1.0) - boost::math::lgamma(jd + 1.0) -
                        boost::math::lgamma(z - jd + 1.0));
    }
    if (z < 0.0) {
        // Every factor (z - m) is negative.
        const double magnitude = std::exp(log_gamma_diff(jd - z, jd + 1.0) - boost::math::lgamma(-z));
        return (j % 2 == 0) ? magnitude : -magnitude;
    }
    if (z > jd - 1.0) {
        // Every factor positive.
        return std::exp(boost::math::lgamma(z + 1.0) - boost::math::lgamma(jd + 1.0) -
                        boost::math::lgamma(z - jd + 1.0));
    }
    // 0 < z < j - 1, non-integer: floor(z) + 1 positive factors, the rest negative.
    const double fl = std::floor(z);
    const double frac = z - fl;
    const double log_positive = boost::math::lgamma(z + 1.0) - boost::math::lgamma(frac);
    const double log_negative = log_gamma_diff(jd - z, jd + 1.0) - boost::math::lgamma(1.0 - frac);
    const double magnitude = std::exp(log_positive + log_negative);
    const auto negatives = static_cast<long long>(j) - 1 - static_cast<long long>(fl);
    return (negatives % 2 == 0) ? magnitude : -magnitude;
}

double zeta_int(unsigned j) {
    static constexpr std::array<double, 11> table = {
        1.6449340668482264365, // zeta(2)
        1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
        1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394,
        1.0020083928260822144, 1.0009945751278180853, 1.0004941886041194646,
        1.0002460865533080483, // zeta(12)
    };
    if (j < 2 || j > 12) {
        throw std::out_of_range("zeta_int: argument must be in 2..12");
    }
    return table[j - 2];
}

double gumbel_cumulant(unsigned j) {
    if (j == 1) {
        return euler_gamma;
    }
    double fact = 1.0;
    for (unsigned m = 2; m < j; ++m) {
        fact *= m;
    }
    return fact * zeta_int(j);
}

} // namespace coalab
