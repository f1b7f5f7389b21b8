#include "coalab/combinatorics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace coalab {

ExactRational make_rational(const ExactInt& num, const ExactInt& den) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    ExactRational q(num, den);
    q.canonicalize();
    return q;
}

ExactRational make_rational(long num, long den) {
    return make_rational(ExactInt(num), ExactInt(den));
}

std::string to_string(const ExactInt& z) { return z.get_str(); }

std::string to_string(const ExactRational& q) {
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

ExactRational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    ExactInt num, den(1);
    try {
        if (slash == std::string::npos) {
            num = ExactInt(text);
        } else {
            num = ExactInt(text.substr(0, slash));
            den = ExactInt(text.substr(slash + 1));
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
    return make_rational(num, den);
}

ExactRational exact_from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("exact_from_double: non-finite input");
    }
    // mpq_set_d is exact for finite doubles.
    ExactRational q(x);
    q.canonicalize();
    return q;
}

std::size_t ExactIntHash::operator()(const ExactInt& z) const {
    const mpz_srcptr raw = z.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(mpz_sgn(raw)) * 0x9e3779b97f4a7c15ULL;
    const std::size_t limbs = mpz_size(raw);
    for (std::size_t i = 0; i < limbs; ++i) {
        h ^= static_cast<std::size_t>(mpz_getlimbn(raw, i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

ExactInt factorial(unsigned n) {
    ExactInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

ExactInt binomial(unsigned n, unsigned k) {
    if (k > n) {
        return 0;
    }
    ExactInt b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

StirlingTable::StirlingTable(StirlingKind kind, unsigned n_max)
    : kind_(kind), n_max_(n_max), rows_(n_max + 1) {
    rows_[0] = {ExactInt(1)};
    for (unsigned n = 0; n < n_max; ++n) {
        const auto& prev = rows_[n];
        auto& next = rows_[n + 1];
        next.assign(n + 2, ExactInt(0));
        for (unsigned k = 1; k <= n + 1; ++k) {
            const ExactInt& diag = prev[k - 1];
            const ExactInt same = k <= n ? prev[k] : ExactInt(0);
            if (kind == StirlingKind::first_signed) {
                next[k] = diag - ExactInt(n) * same;
            } else {
                next[k] = ExactInt(k) * same + diag;
            }
        }
    }
}

const ExactInt& StirlingTable::operator()(unsigned n, unsigned k) const {
    static const ExactInt zero(0);
    if (n > n_max_ || k > n_max_) {
        throw std::out_of_range("Stirling index (" + std::to_string(n) + ", " +
                                std::to_string(k) + ") exceeds n_max = " +
                                std::to_string(n_max_));
    }
    if (k > n) {
        return zero;
    }
    return rows_[n][k];
}

unsigned stirling_nmax() {
    static const unsigned value = [] {
        const char* env = std::getenv("COALAB_NMAX");
        if (env == nullptr || *env == '\0') {
            return 256u;
        }
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (*end != '\0' || parsed == 0 || parsed > 100000) {
            throw std::invalid_argument(std::string("invalid COALAB_NMAX: ") + env);
        }
        return static_cast<unsigned>(parsed);
    }();
    return value;
}

const StirlingTable& stirling_first_table() {
    static const StirlingTable table(StirlingKind::first_signed, stirling_nmax());
    return table;
}

const StirlingTable& stirling_second_table() {
    static const StirlingTable table(StirlingKind::second, stirling_nmax());
    return table;
}

const ExactInt& stirling_first(unsigned n, unsigned k) { return stirling_first_table()(n, k); }

const ExactInt& stirling_second(unsigned n, unsigned k) { return stirling_second_table()(n, k); }

} // namespace coalab
