#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include "coalab/special_functions.hpp"

using namespace coalab;

namespace {

long double binomial_product(long double z, unsigned j) {
    long double v = 1.0L;
    for (unsigned m = 0; m < j; ++m) {
        v *= (z - m) / (m + 1);
    }
    return v;
}

} // namespace

TEST_SUITE("special_functions") {

TEST_CASE("log gamma") {
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
    CHECK(log_gamma(1.0) == doctest::Approx(0.0));
    CHECK(log_gamma(11.0) == doctest::Approx(std::log(3628800.0)).epsilon(1e-15));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log gamma difference avoids cancellation") {
    for (double y : {25.0, 1e3, 1e6, 1e9}) {
        for (double d : {-0.9, -0.3, 0.2, 0.7, 3.0}) {
            const long double expected = lgammal(static_cast<long double>(y) + d) - lgammal(static_cast<long double>(y));
            const double tol = y > 1e7 ? 1e-6 : 1e-9;
            CHECK(std::abs(log_gamma_diff(y + d, y) - static_cast<double>(expected)) < tol);
        }
    }
    CHECK(log_gamma_diff(3.0, 3.0) == 0.0);
    CHECK(log_gamma_diff(5.0, 2.0) == doctest::Approx(std::log(24.0)));
}

TEST_CASE("reciprocal gamma") {
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK(reciprocal_gamma(-3.0) == 0.0);
    CHECK(reciprocal_gamma(-0.5) == doctest::Approx(-1.0 / (2.0 * std::sqrt(std::numbers::pi))));
    CHECK(reciprocal_gamma(5.0) == doctest::Approx(1.0 / 24.0));
    for (double x : {0.1, 0.7, 1.3, 4.5, 17.2}) {
        CHECK(reciprocal_gamma(x) == doctest::Approx(1.0 / std::tgamma(x)).epsilon(1e-13));
        CHECK(reciprocal_gamma(-x) == doctest::Approx(1.0 / std::tgamma(-x)).epsilon(1e-12));
    }
    CHECK(reciprocal_gamma(170.5) > 0.0);
}

TEST_CASE("generalized binomial coefficient") {
    CHECK(general_binomial(5.0, 2) == doctest::Approx(10.0));
    CHECK(general_binomial(0.5, 2) == doctest::Approx(-0.125));
    CHECK(general_binomial(-1.0, 3) == doctest::Approx(-1.0));
    CHECK(general_binomial(3.0, 0) == 1.0);
    CHECK(general_binomial(70.0, 80) == 0.0);
    CHECK(general_binomial(100.0, 70) == doctest::Approx(std::exp(std::lgamma(101.0) - std::lgamma(71.0) - std::lgamma(31.0))).epsilon(1e-10));
    // Large j takes the log-gamma branches; compare with a long double product.
    for (double z : {-0.3, -4.6, 0.4, 10.7, 40.25, 100.5, 300.0 / 7.0}) {
        for (unsigned j : {65U, 90U, 150U, 400U}) {
            const long double expected = binomial_product(z, j);
            const double got = general_binomial(z, j);
            CHECK(std::signbit(got) == std::signbit(static_cast<double>(expected)));
            CHECK(got == doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
        }
    }
}

TEST_CASE("zeta table and Gumbel cumulants") {
    for (unsigned j = 2; j <= 12; ++j) {
        CHECK(zeta_int(j) == doctest::Approx(boost::math::zeta(static_cast<double>(j))).epsilon(1e-15));
    }
    CHECK_THROWS_AS(zeta_int(1), std::out_of_range);
    CHECK_THROWS_AS(zeta_int(13), std::out_of_range);
    CHECK(gumbel_cumulant(1) == doctest::Approx(0.5772156649015329));
    CHECK(gumbel_cumulant(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0));
    CHECK(gumbel_cumulant(4) == doctest::Approx(6.0 * std::pow(std::numbers::pi, 4) / 90.0));
}

}
