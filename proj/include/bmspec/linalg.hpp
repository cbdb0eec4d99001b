#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bmspec {

using Vec = std::vector<double>;

// Dense row-major matrix, value semantics. Everything here is desk scale
// (d <= a few hundred), so no blocking or BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: data size mismatch");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

Vec matvec(const Matrix& a, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

double max_abs(const Matrix& a);
double max_abs_row_sum(const Matrix& a);

// In-place modified Gram-Schmidt with one re-orthogonalization pass.
// Vectors whose projected norm falls below drop_tol * original norm are
// dropped. Returns the surviving orthonormal set.
std::vector<Vec> orthonormalize(std::vector<Vec> vecs, double drop_tol = 1e-10);

// Project x onto the orthogonal complement of an orthonormal set, in place.
void project_out(std::span<const Vec> basis, Vec& x);

// Orthonormal basis of the complement of an orthonormal set in R^dim.
std::vector<Vec> complement_basis(std::span<const Vec> basis, std::size_t dim);

// Solve a*x = b via LU with partial pivoting. Near-singular systems are
// solved as-is (used for inverse iteration, where that is the target).
Vec lu_solve(Matrix a, Vec b);

// Pivoted Cholesky of a symmetric PSD matrix. Returns d x r factor L with
// L*L^T = sigma, r = numerical rank at rank_tol * max diagonal.
Matrix pivoted_cholesky(const Matrix& sigma, double rank_tol = 1e-12);

} // namespace bmspec
