#include "coalab/spectral.hpp"

#include <stdexcept>
#include <utility>

namespace coalab {

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::bs_block:
        return "bs-block";
    case GeneratorKind::bs_fixation:
        return "bs-fixation";
    case GeneratorKind::kingman_fixation:
        return "kingman-fixation";
    }
    return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "bs-block") {
        return GeneratorKind::bs_block;
    }
    if (name == "bs-fixation") {
        return GeneratorKind::bs_fixation;
    }
    if (name == "kingman-fixation") {
        return GeneratorKind::kingman_fixation;
    }
    throw std::invalid_argument("unknown generator kind '" + std::string(name) + "'");
}

Orientation orientation_of(GeneratorKind kind) {
    return kind == GeneratorKind::bs_block ? Orientation::lower : Orientation::upper;
}

TriangularMatrix::TriangularMatrix(unsigned n, Orientation orientation)
    : n_(n), orientation_(orientation), entries_(static_cast<std::size_t>(n) * n) {}

std::size_t TriangularMatrix::index(unsigned i, unsigned j) const {
    if (i < 1 || j < 1 || i > n_ || j > n_) {
        throw std::out_of_range("matrix index (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") outside 1.." + std::to_string(n_));
    }
    return static_cast<std::size_t>(i - 1) * n_ + (j - 1);
}

const ExactRational& TriangularMatrix::at(unsigned i, unsigned j) const { return entries_[index(i, j)]; }

void TriangularMatrix::set(unsigned i, unsigned j, ExactRational value) {
    const auto idx = index(i, j);
    if (!in_triangle(i, j) && value != 0) {
        throw std::domain_error("nonzero entry outside the triangle");
    }
    entries_[idx] = std::move(value);
}

TriangularMatrix TriangularMatrix::transposed() const {
    TriangularMatrix t(n_, orientation_ == Orientation::upper ? Orientation::lower : Orientation::upper);
    for (unsigned i = 1; i <= n_; ++i) {
        for (unsigned j = 1; j <= n_; ++j) {
            t.entries_[t.index(j, i)] = entries_[index(i, j)];
        }
    }
    return t;
}

bool operator==(const TriangularMatrix& a, const TriangularMatrix& b) {
    return a.n_ == b.n_ && a.orientation_ == b.orientation_ && a.entries_ == b.entries_;
}

namespace {

void require_compatible(const TriangularMatrix& a, const TriangularMatrix& b) {
    if (a.size() != b.size() || a.orientation() != b.orientation()) {
        throw std::invalid_argument("triangular product needs equal size and orientation");
    }
}

} // namespace

TriangularMatrix multiply(const TriangularMatrix& a, const TriangularMatrix& b) {
    require_compatible(a, b);
    const unsigned n = a.size();
    TriangularMatrix c(n, a.orientation());
    const bool upper = a.orientation() == Orientation::upper;
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = 1; j <= n; ++j) {
            if (!c.in_triangle(i, j)) {
                continue;
            }
            // Only k between i and j contributes.
            const unsigned lo = upper ? i : j;
            const unsigned hi = upper ? j : i;
            ExactRational sum = 0;
            for (unsigned k = lo; k <= hi; ++k) {
                sum += a.at(i, k) * b.at(k, j);
            }
            c.set(i, j, std::move(sum));
        }
    }
    return c;
}

TriangularMatrix multiply(const TriangularMatrix& a, const std::vector<ExactRational>& d,
                          const TriangularMatrix& b) {
    require_compatible(a, b);
    if (d.size() != a.size()) {
        throw std::invalid_argument("diagonal length does not match matrix size");
    }
    TriangularMatrix scaled = a;
    for (unsigned i = 1; i <= a.size(); ++i) {
        for (unsigned k = 1; k <= a.size(); ++k) {
            if (a.in_triangle(i, k)) {
                scaled.set(i, k, a.at(i, k) * d[k - 1]);
            }
        }
    }
    return multiply(scaled, b);
}

bool is_identity(const TriangularMatrix& m) {
    for (unsigned i = 1; i <= m.size(); ++i) {
        for (unsigned j = 1; j <= m.size(); ++j) {
            if (m.at(i, j) != (i == j ? 1 : 0)) {
                return false;
            }
        }
    }
    return true;
}

ExactRational generator_entry(GeneratorKind kind, long i, long j) {
    if (i < 1 || j < 1) {
        throw std::out_of_range("generator indices are 1-based");
    }
    switch (kind) {
    case GeneratorKind::bs_block:
        if (j < i) {
            return make_rational(i, (i - j) * (i - j + 1));
        }
        return j == i ? ExactRational(1 - i) : ExactRational(0);
    case GeneratorKind::bs_fixation:
        if (j > i) {
            return make_rational(i, (j - i) * (j - i + 1));
        }
        return j == i ? ExactRational(-i) : ExactRational(0);
    case GeneratorKind::kingman_fixation: {
        const long rate = i * (i + 1) / 2;
        if (j == i + 1) {
            return ExactRational(rate);
        }
        return j == i ? ExactRational(-rate) : ExactRational(0);
    }
    }
    throw std::invalid_argument("unknown generator kind");
}

TriangularMatrix build_generator(GeneratorKind kind, unsigned n) {
    TriangularMatrix g(n, orientation_of(kind));
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = 1; j <= n; ++j) {
            if (g.in_triangle(i, j)) {
                g.set(i, j, generator_entry(kind, i, j));
            }
        }
    }
    return g;
}

namespace {

ExactRational factorial_ratio(unsigned num, unsigned den) {
    return make_rational(factorial(num), factorial(den));
}

int parity_sign(unsigned a) { return a % 2 == 0 ? 1 : -1; }

} // namespace

SpectralDecomposition closed_form_decomposition(GeneratorKind kind, unsigned n) {
    const Orientation orient = orientation_of(kind);
    SpectralDecomposition dec{kind, n, TriangularMatrix(n, orient), {}, TriangularMatrix(n, orient)};
    dec.eigen.reserve(n);
    for (unsigned i = 1; i <= n; ++i) {
        dec.eigen.push_back(generator_entry(kind, i, i));
    }

    switch (kind) {
    case GeneratorKind::bs_fixation:
        // r_ij = (i!/j!) (-1)^{i+j} S(j, i),  l_ij = (i!/j!) (-1)^{i+j} s(j, i).
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = i; j <= n; ++j) {
                const ExactRational ratio = factorial_ratio(i, j) * parity_sign(i + j);
                dec.right.set(i, j, ratio * ExactRational(stirling_second(j, i)));
                dec.left.set(i, j, ratio * ExactRational(stirling_first(j, i)));
            }
        }
        break;
    case GeneratorKind::bs_block:
        // r_ij = ((j-1)!/(i-1)!) |s(i, j)|,  l_ij = (-1)^{i+j} ((j-1)!/(i-1)!) S(i, j).
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = 1; j <= i; ++j) {
                const ExactRational ratio = factorial_ratio(j - 1, i - 1);
                dec.right.set(i, j, ratio * ExactRational(abs(stirling_first(i, j))));
                dec.left.set(i, j, ratio * parity_sign(i + j) * ExactRational(stirling_second(i, j)));
            }
        }
        break;
    case GeneratorKind::kingman_fixation:
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = i; j <= n; ++j) {
                const ExactInt r_num = factorial(j) * factorial(j - 1) * factorial(i + j);
                const ExactInt r_den = factorial(j - i) * factorial(i) * factorial(i - 1) * factorial(2 * j);
                dec.right.set(i, j, make_rational(r_num, r_den) * parity_sign(j - i));
                const ExactInt l_num = factorial(j) * factorial(j - 1) * factorial(2 * i + 1);
                const ExactInt l_den = factorial(i) * factorial(i - 1) * factorial(j - i) * factorial(i + j + 1);
                dec.left.set(i, j, make_rational(l_num, l_den));
            }
        }
        break;
    }
    return dec;
}

namespace {

// Upper-triangular case: G R = R D and L G = D L with unit diagonals.
std::pair<TriangularMatrix, TriangularMatrix> upper_eigenvectors(const TriangularMatrix& g,
                                                                 const std::vector<ExactRational>& d) {
    const unsigned n = g.size();
    TriangularMatrix right(n, Orientation::upper);
    TriangularMatrix left(n, Orientation::upper);
    for (unsigned j = 1; j <= n; ++j) {
        right.set(j, j, 1);
        for (unsigned i = j - 1; i >= 1; --i) {
            ExactRational sum = 0;
            for (unsigned k = i + 1; k <= j; ++k) {
                sum += g.at(i, k) * right.at(k, j);
            }
            right.set(i, j, sum / (d[j - 1] - d[i - 1]));
        }
    }
    for (unsigned i = 1; i <= n; ++i) {
        left.set(i, i, 1);
        for (unsigned j = i + 1; j <= n; ++j) {
            ExactRational sum = 0;
            for (unsigned k = i; k < j; ++k) {
                sum += left.at(i, k) * g.at(k, j);
            }
            left.set(i, j, sum / (d[i - 1] - d[j - 1]));
        }
    }
    return {std::move(right), std::move(left)};
}

} // namespace

SpectralDecomposition recursive_decomposition(const TriangularMatrix& generator, GeneratorKind kind) {
    std::vector<ExactRational> d;
    d.reserve(generator.size());
    for (unsigned i = 1; i <= generator.size(); ++i) {
        d.push_back(generator.at(i, i));
    }
    return recursive_decomposition(generator, std::move(d), kind);
}

SpectralDecomposition recursive_decomposition(const TriangularMatrix& generator, std::vector<ExactRational> d,
                                              GeneratorKind kind) {
    const unsigned n = generator.size();
    if (d.size() != n) {
        throw std::invalid_argument("eigenvalue count does not match generator size");
    }
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) {
            if (d[i] == d[j]) {
                throw DegenerateSpectrum("repeated eigenvalue " + to_string(d[i]) + " at positions " +
                                         std::to_string(i + 1) + " and " + std::to_string(j + 1));
            }
        }
    }

    if (generator.orientation() == Orientation::upper) {
        auto [right, left] = upper_eigenvectors(generator, d);
        return {kind, n, std::move(right), std::move(d), std::move(left)};
    }
    // G^T = R' D L'  implies  G = L'^T D R'^T.
    auto [right_t, left_t] = upper_eigenvectors(generator.transposed(), d);
    return {kind, n, left_t.transposed(), std::move(d), right_t.transposed()};
}

VerificationReport verify_decomposition(const SpectralDecomposition& dec) {
    VerificationReport report;
    report.right_left_identity = is_identity(multiply(dec.right, dec.left));
    const TriangularMatrix generator = build_generator(dec.kind, dec.n);
    report.reconstructs_generator = multiply(dec.right, dec.eigen, dec.left) == generator;
    report.eigen_matches_diagonal = dec.eigen.size() == dec.n;
    for (unsigned i = 1; report.eigen_matches_diagonal && i <= dec.n; ++i) {
        report.eigen_matches_diagonal = dec.eigen[i - 1] == generator.at(i, i);
    }
    return report;
}

} // namespace coalab
