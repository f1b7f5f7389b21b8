#include <doctest.h>

#include <unordered_set>
#include <vector>

#include "coalab/combinatorics.hpp"

using namespace coalab;

namespace {

// Coefficients of x (x - 1) ... (x - n + 1), lowest degree first.
std::vector<ExactInt> falling_factorial_coefficients(unsigned n) {
    std::vector<ExactInt> poly{ExactInt(1)};
    for (unsigned m = 0; m < n; ++m) {
        std::vector<ExactInt> next(poly.size() + 1, ExactInt(0));
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d + 1] += poly[d];
            next[d] -= ExactInt(m) * poly[d];
        }
        poly = std::move(next);
    }
    return poly;
}

// S(n, k) = (1/k!) sum_j (-1)^{k-j} C(k, j) j^n
ExactInt second_kind_explicit(unsigned n, unsigned k) {
    ExactInt sum = 0;
    for (unsigned j = 0; j <= k; ++j) {
        ExactInt power;
        mpz_ui_pow_ui(power.get_mpz_t(), j, n);
        ExactInt term = binomial(k, j) * power;
        if ((k - j) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum / factorial(k);
}

} // namespace

TEST_SUITE("combinatorics") {

TEST_CASE("rationals are kept in lowest terms with a positive denominator") {
    const auto q = make_rational(6, -4);
    CHECK(q.get_num() == -3);
    CHECK(q.get_den() == 2);
    CHECK(to_string(q) == "-3/2");
    CHECK(to_string(make_rational(8, 4)) == "2");
    CHECK_THROWS_AS(make_rational(1, 0), std::domain_error);
}

TEST_CASE("rational text round trip") {
    for (const char* text : {"19087/60480", "-7/3", "0", "123456789012345678901234567890"}) {
        CHECK(to_string(parse_rational(text)) == text);
    }
    CHECK(parse_rational("10/4") == make_rational(5, 2));
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::domain_error);
}

TEST_CASE("exact_from_double is the binary value") {
    const auto tenth = exact_from_double(0.1);
    CHECK(tenth != make_rational(1, 10));
    CHECK(mpz_popcount(tenth.get_den().get_mpz_t()) == 1);
    CHECK(tenth.get_d() == 0.1);
    CHECK(exact_from_double(-2.5) == make_rational(-5, 2));
    CHECK_THROWS_AS(exact_from_double(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("equal integers hash equally") {
    ExactIntHash h;
    ExactInt a = factorial(40);
    ExactInt b = factorial(41) / 41;
    CHECK(a == b);
    CHECK(h(a) == h(b));
    std::unordered_set<ExactInt, ExactIntHash> set{a, b, ExactInt(-1), ExactInt(1)};
    CHECK(set.size() == 3);
}

TEST_CASE("factorial and binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(20) == ExactInt("2432902008176640000"));
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(3, 10) == 0);
    CHECK(binomial(100, 50) == ExactInt("100891344545564193334812497256"));
}

TEST_CASE("small Stirling values") {
    CHECK(stirling_first(4, 2) == 11);
    CHECK(stirling_first(5, 2) == -50);
    CHECK(stirling_second(5, 3) == 25);
    CHECK(stirling_first(0, 0) == 1);
    CHECK(stirling_second(0, 0) == 1);
    CHECK(stirling_first(7, 0) == 0);
    CHECK(stirling_second(3, 5) == 0);
}

TEST_CASE("first kind matches the falling factorial expansion") {
    for (unsigned n = 0; n <= 30; ++n) {
        const auto coeffs = falling_factorial_coefficients(n);
        for (unsigned k = 0; k <= n; ++k) {
            CHECK(stirling_first(n, k) == coeffs[k]);
        }
    }
}

TEST_CASE("second kind matches the explicit alternating sum") {
    for (unsigned n = 0; n <= 30; ++n) {
        for (unsigned k = 0; k <= n; ++k) {
            CHECK(stirling_second(n, k) == second_kind_explicit(n, k));
        }
    }
}

TEST_CASE("row sums give factorials and Bell numbers") {
    std::vector<ExactInt> bell{ExactInt(1)};
    for (unsigned n = 0; n < 40; ++n) {
        ExactInt next = 0;
        for (unsigned k = 0; k <= n; ++k) {
            next += binomial(n, k) * bell[k];
        }
        bell.push_back(next);
    }
    for (unsigned n = 0; n <= 40; ++n) {
        ExactInt abs_sum = 0;
        ExactInt second_sum = 0;
        for (unsigned k = 0; k <= n; ++k) {
            abs_sum += abs(stirling_first(n, k));
            second_sum += stirling_second(n, k);
        }
        CHECK(abs_sum == factorial(n));
        CHECK(second_sum == bell[n]);
    }
}

TEST_CASE("the two kinds are inverse matrices") {
    for (unsigned n = 0; n <= 30; ++n) {
        for (unsigned m = 0; m <= 30; ++m) {
            ExactInt a = 0;
            ExactInt b = 0;
            for (unsigned k = 0; k <= 30; ++k) {
                a += stirling_first(n, k) * stirling_second(k, m);
                b += stirling_second(n, k) * stirling_first(k, m);
            }
            CHECK(a == (n == m ? 1 : 0));
            CHECK(b == (n == m ? 1 : 0));
        }
    }
}

TEST_CASE("tables reject indices past their size") {
    StirlingTable small(StirlingKind::second, 5);
    CHECK(small(5, 2) == 15);
    CHECK(small(2, 4) == 0);
    CHECK_THROWS_AS(small(6, 1), std::out_of_range);
    CHECK_THROWS_AS(stirling_first(stirling_nmax() + 1, 1), std::out_of_range);
}

}
