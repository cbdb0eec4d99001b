#include "bmspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace bmspec {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
    for (double& v : x) v *= alpha;
}

Vec matvec(const Matrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::fabs(v));
    return m;
}

double max_abs_row_sum(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

std::vector<Vec> orthonormalize(std::vector<Vec> vecs, double drop_tol) {
    std::vector<Vec> basis;
    for (Vec& v : vecs) {
        double original = norm2(v);
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : basis) axpy(-dot(b, v), b, v);
        double remaining = norm2(v);
        if (remaining < drop_tol * original) continue;
        scale(1.0 / remaining, v);
        basis.push_back(std::move(v));
    }
    return basis;
}

void project_out(std::span<const Vec> basis, Vec& x) {
    for (const Vec& b : basis) axpy(-dot(b, x), b, x);
}

std::vector<Vec> complement_basis(std::span<const Vec> basis, std::size_t dim) {
    std::vector<Vec> full(basis.begin(), basis.end());
    std::vector<Vec> comp;
    for (std::size_t j = 0; j < dim; ++j) {
        Vec e(dim, 0.0);
        e[j] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vec& b : full) axpy(-dot(b, e), b, e);
            for (const Vec& b : comp) axpy(-dot(b, e), b, e);
        }
        double n = norm2(e);
        if (n < 1e-8) continue;
        scale(1.0 / n, e);
        comp.push_back(std::move(e));
    }
    return comp;
}

Vec lu_solve(Matrix a, Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
    std::vector<std::size_t> piv(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
        piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        double pivval = a(k, k);
        if (pivval == 0.0) pivval = 1e-300;  // exactly singular: perturb, caller renormalizes
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a(i, k) / pivval;
            a(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
        a(k, k) = pivval;
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

Matrix pivoted_cholesky(const Matrix& sigma, double rank_tol) {
    const std::size_t n = sigma.rows();
    if (sigma.cols() != n) throw std::invalid_argument("pivoted_cholesky: not square");
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = sigma(i, i);
    double max_diag = 0.0;
    for (double d : diag) max_diag = std::max(max_diag, d);
    const double cutoff = rank_tol * std::max(max_diag, 1e-300);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    Matrix l(n, n);  // rows permuted back at the end, columns trimmed to rank
    std::size_t rank = 0;
    std::vector<double> d(diag);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (d[perm[i]] > d[perm[p]]) p = i;
        if (d[perm[p]] <= cutoff) break;
        std::swap(perm[k], perm[p]);
        const std::size_t pk = perm[k];
        double lkk = std::sqrt(d[pk]);
        l(pk, k) = lkk;
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::size_t pi = perm[i];
            double s = sigma(pi, pk);
            for (std::size_t j = 0; j < k; ++j) s -= l(pi, j) * l(pk, j);
            double lik = s / lkk;
            l(pi, k) = lik;
            d[pi] -= lik * lik;
        }
        ++rank;
    }

    Matrix out(n, rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rank; ++j) out(i, j) = l(i, j);
    return out;
}

} // namespace bmspec
