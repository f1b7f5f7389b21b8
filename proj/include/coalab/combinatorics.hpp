#pragma once

// Exact integer and rational arithmetic plus Stirling number tables.
//
// All combinatorial indices in this library are 1-based where they refer to
// matrix positions and 0-based where they refer to Stirling arguments, i.e.
// stirling_first(n, k) is s(n, k) with s(0, 0) = 1.

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace coalab {

using ExactInt = mpz_class;
using ExactRational = mpq_class;

/// Builds a rational in lowest terms; throws std::domain_error on a zero
/// denominator.
ExactRational make_rational(const ExactInt& num, const ExactInt& den);
ExactRational make_rational(long num, long den = 1);

/// "num/den" (or just "num" when the denominator is one).
std::string to_string(const ExactRational& q);
std::string to_string(const ExactInt& z);

/// Parses "num/den" or "num"; throws std::invalid_argument.
ExactRational parse_rational(const std::string& text);

/// Exact dyadic rational equal to the given finite double.
ExactRational exact_from_double(double x);

struct ExactIntHash {
    std::size_t operator()(const ExactInt& z) const;
};

ExactInt factorial(unsigned n);
ExactInt binomial(unsigned n, unsigned k);

enum class StirlingKind { first_signed, second };

/// Lower-triangular table of Stirling numbers s(n, k) or S(n, k) for
/// 0 <= k <= n <= n_max, built from the three-term recurrences
///   s(n+1, k) = s(n, k-1) - n s(n, k),   S(n+1, k) = k S(n, k) + S(n, k-1).
class StirlingTable {
public:
    StirlingTable(StirlingKind kind, unsigned n_max);

    StirlingKind kind() const { return kind_; }
    unsigned n_max() const { return n_max_; }

    /// Zero outside the triangle. Throws std::out_of_range past n_max.
    const ExactInt& operator()(unsigned n, unsigned k) const;

private:
    StirlingKind kind_;
    unsigned n_max_;
    std::vector<std::vector<ExactInt>> rows_;
};

/// Configured table size: COALAB_NMAX from the environment if set, else 256.
unsigned stirling_nmax();

/// Process-wide cached tables of size stirling_nmax(), built on first use.
const StirlingTable& stirling_first_table();
const StirlingTable& stirling_second_table();

/// Signed Stirling number of the first kind s(n, k).
const ExactInt& stirling_first(unsigned n, unsigned k);
/// Stirling number of the second kind S(n, k).
const ExactInt& stirling_second(unsigned n, unsigned k);

} // namespace coalab
