#pragma once

// Triangular generators Q (BS-block: number of blocks N), Gamma (BS-fixation:
// L) and the Kingman analogue of Gamma, with exact spectral decompositions
// G = R diag(D) L where L = R^{-1}.
//
// Indexing is 1-based: entry (i, j) of an n x n truncation has
// 1 <= i, j <= n, matching the state labels of the chains.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coalab/combinatorics.hpp"

namespace coalab {

enum class GeneratorKind { bs_block, bs_fixation, kingman_fixation };

std::string_view to_string(GeneratorKind kind);
/// Accepts "bs-block", "bs-fixation", "kingman-fixation".
GeneratorKind parse_generator_kind(std::string_view name);

enum class Orientation { upper, lower };

/// BS-block is lower triangular; both fixation kinds are upper triangular.
Orientation orientation_of(GeneratorKind kind);

/// Dense n x n matrix of exact rationals that is zero outside one triangle.
class TriangularMatrix {
public:
    TriangularMatrix(unsigned n, Orientation orientation);

    unsigned size() const { return n_; }
    Orientation orientation() const { return orientation_; }

    bool in_triangle(unsigned i, unsigned j) const {
        return orientation_ == Orientation::upper ? i <= j : j <= i;
    }

    /// Throws std::out_of_range for indices outside 1..n.
    const ExactRational& at(unsigned i, unsigned j) const;
    /// Throws std::out_of_range outside 1..n and std::domain_error when
    /// (i, j) lies outside the triangle.
    void set(unsigned i, unsigned j, ExactRational value);

    TriangularMatrix transposed() const;

    friend bool operator==(const TriangularMatrix& a, const TriangularMatrix& b);

private:
    std::size_t index(unsigned i, unsigned j) const;

    unsigned n_;
    Orientation orientation_;
    std::vector<ExactRational> entries_;
};

/// Product of two triangular matrices of the same size and orientation.
TriangularMatrix multiply(const TriangularMatrix& a, const TriangularMatrix& b);
/// a * diag(d) * b.
TriangularMatrix multiply(const TriangularMatrix& a, const std::vector<ExactRational>& d,
                          const TriangularMatrix& b);
bool is_identity(const TriangularMatrix& m);

/// Entry (i, j) of the infinite generator. Throws std::out_of_range for a
/// nonpositive index.
ExactRational generator_entry(GeneratorKind kind, long i, long j);

/// The n x n window of the infinite generator. Diagonal entries keep their
/// untruncated values, so truncated fixation rows need not sum to zero.
TriangularMatrix build_generator(GeneratorKind kind, unsigned n);

struct SpectralDecomposition {
    GeneratorKind kind;
    unsigned n;
    TriangularMatrix right;              // R, unit diagonal
    std::vector<ExactRational> eigen;    // D, eigen[i - 1] = d_i
    TriangularMatrix left;               // L = R^{-1}, unit diagonal
};

/// Closed forms in Stirling numbers (BS kinds) or factorial ratios (Kingman).
SpectralDecomposition closed_form_decomposition(GeneratorKind kind, unsigned n);

/// Thrown when a triangular generator has a repeated diagonal entry.
class DegenerateSpectrum : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Eigenvector matrices from the triangular back-substitution recursions
/// (right vectors column by column, left vectors row by row), eigenvalues
/// read off the diagonal. Lower-triangular input is handled through its
/// transpose.
SpectralDecomposition recursive_decomposition(const TriangularMatrix& generator, GeneratorKind kind);
/// Same, with the eigenvalue sequence supplied explicitly (normally the
/// generator diagonal).
SpectralDecomposition recursive_decomposition(const TriangularMatrix& generator, std::vector<ExactRational> eigen,
                                              GeneratorKind kind);

struct VerificationReport {
    bool right_left_identity = false;     // R L = I
    bool reconstructs_generator = false;  // R diag(D) L = generator window
    bool eigen_matches_diagonal = false;  // D equals the generator diagonal
    bool ok() const { return right_left_identity && reconstructs_generator && eigen_matches_diagonal; }
};

VerificationReport verify_decomposition(const SpectralDecomposition& dec);

} // namespace coalab
