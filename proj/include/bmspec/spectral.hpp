#pragma once

#include <optional>
#include <vector>

#include "bmspec/linalg.hpp"

namespace bmspec {

// Self-adjoint operator on R^d; symmetry is validated on construction.
class SymmetricOperator {
public:
    explicit SymmetricOperator(Matrix entries);

    std::size_t dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    double at(std::size_t i, std::size_t j) const { return entries_(i, j); }

    Vec apply(std::span<const double> x) const { return matvec(entries_, x); }

    SymmetricOperator negated() const;
    SymmetricOperator plus(const SymmetricOperator& other) const;

    // |entries[i][j] - entries[j][i]| relative to max |entry|, for validation
    // diagnostics before construction throws
    static double asymmetry(const Matrix& entries, std::size_t* worst_i = nullptr,
                            std::size_t* worst_j = nullptr);

private:
    Matrix entries_;
};

struct EigenPair {
    double value = 0.0;
    Vec vector;
};

enum class ExtremalSign { Positive, Negative };

// Signed spectrum: strictly positive eigenvalues nonincreasing, strictly
// negative nondecreasing, both with multiplicity, plus the null-space count.
struct SignedSpectrum {
    std::vector<EigenPair> pos;
    std::vector<EigenPair> neg;
    std::size_t zero_mult = 0;

    std::vector<double> pos_values() const;
    std::vector<double> neg_values() const;
    // all d eigenvalues (zeros included), sorted descending
    std::vector<double> all_values(std::size_t dim) const;
};

double quadratic_form(const SymmetricOperator& a, std::span<const double> x);

// Spectral norm, max(mu_1^+, |mu_1^-|) over whichever exist.
double operator_norm(const SymmetricOperator& a);

// Extremal eigenpair of (Ax, x) over unit x orthogonal to the constraints:
// projected shifted power iteration with Rayleigh-quotient refinement.
// Returns nullopt ("exhausted") when the constrained extremum is not
// strictly positive (resp. negative) beyond zero_tol.
std::optional<EigenPair> deflated_extremal(const SymmetricOperator& a, ExtremalSign sign,
                                           const std::vector<Vec>& constraints,
                                           double zero_tol = -1.0);

// Full signed spectrum by repeated deflation.
SignedSpectrum signed_spectrum(const SymmetricOperator& a, double tol_zero = -1.0);

struct OracleSpectrum {
    std::vector<double> values;  // sorted descending
    Matrix vectors;              // column k pairs with values[k]
};

// Independent verification path: cyclic Jacobi diagonalization, sharing no
// code with the deflation solver.
OracleSpectrum oracle_spectrum(const SymmetricOperator& a);

// nu(h_1, ..., h_m): sup of (Ax, x) over unit x orthogonal to the given
// vectors, via compression to the orthogonal complement.
double minmax_value(const SymmetricOperator& a, const std::vector<Vec>& h_list);

// || Ax - sum_k mu_k (x, phi_k) phi_k || over the nonzero-eigenvalue pairs.
double decomposition_residual(const SymmetricOperator& a, std::span<const double> x);
double decomposition_residual(const SymmetricOperator& a, const SignedSpectrum& spectrum,
                              std::span<const double> x);

} // namespace bmspec
