#include "bmspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "bmspec/rng.hpp"

namespace bmspec {

SymmetricOperator::SymmetricOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw std::invalid_argument("SymmetricOperator: square nonempty matrix required");
    std::size_t wi = 0, wj = 0;
    double rel = asymmetry(entries_, &wi, &wj);
    if (rel > 1e-12) {
        std::ostringstream msg;
        msg << "SymmetricOperator: entries not symmetric, worst at (" << wi << ", " << wj
            << "): " << entries_(wi, wj) << " vs " << entries_(wj, wi);
        throw std::invalid_argument(msg.str());
    }
}

double SymmetricOperator::asymmetry(const Matrix& entries, std::size_t* worst_i,
                                    std::size_t* worst_j) {
    double scale = max_abs(entries);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < entries.rows(); ++i)
        for (std::size_t j = i + 1; j < entries.cols(); ++j) {
            double gap = std::fabs(entries(i, j) - entries(j, i));
            if (gap > worst) {
                worst = gap;
                if (worst_i) *worst_i = i;
                if (worst_j) *worst_j = j;
            }
        }
    return worst / scale;
}

SymmetricOperator SymmetricOperator::negated() const {
    Matrix m = entries_;
    for (double& v : m.data()) v = -v;
    return SymmetricOperator(std::move(m));
}

SymmetricOperator SymmetricOperator::plus(const SymmetricOperator& other) const {
    if (other.dim() != dim())
        throw std::invalid_argument("SymmetricOperator::plus: dimension mismatch");
    Matrix m = entries_;
    for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] += other.entries_.data()[i];
    return SymmetricOperator(std::move(m));
}

std::vector<double> SignedSpectrum::pos_values() const {
    std::vector<double> v;
    v.reserve(pos.size());
    for (const auto& p : pos) v.push_back(p.value);
    return v;
}

std::vector<double> SignedSpectrum::neg_values() const {
    std::vector<double> v;
    v.reserve(neg.size());
    for (const auto& p : neg) v.push_back(p.value);
    return v;
}

std::vector<double> SignedSpectrum::all_values(std::size_t dim) const {
    std::vector<double> v = pos_values();
    for (std::size_t k = 0; k < zero_mult; ++k) v.push_back(0.0);
    auto nv = neg_values();
    v.insert(v.end(), nv.begin(), nv.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    if (v.size() != dim)
        throw std::logic_error("SignedSpectrum: eigenvalue count != dim");
    return v;
}

double quadratic_form(const SymmetricOperator& a, std::span<const double> x) {
    if (x.size() != a.dim()) throw std::invalid_argument("quadratic_form: dimension mismatch");
    return dot(a.apply(x), x);
}

namespace {

constexpr std::size_t kMaxPowerIters = 20000;

// True when m + eps * I admits a Cholesky factorization with every pivot
// strictly positive, which certifies lambda_min(m) >= -eps up to roundoff
// of order n * u * ||m||. Breakdown only means the certificate at this eps
// is unavailable, so the caller must treat failure as "not bounded".
bool cholesky_succeeds(Matrix m, double eps) {
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) m(i, i) += eps;
    for (std::size_t k = 0; k < n; ++k) {
        double piv = m(k, k);
        if (!(piv > 0.0)) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = m(i, k) / piv;
            for (std::size_t j = k + 1; j <= i; ++j) m(i, j) -= f * m(k, j);
        }
        // the update keeps only the lower triangle; mirror it for row reads
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < i; ++j) m(j, i) = m(i, j);
    }
    return true;
}

// Certificate for lambda_max(b) <= t + eps.
bool bounded_above(const Matrix& b, double t, double eps) {
    const std::size_t n = b.rows();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = -b(i, j);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += t;
    return cholesky_succeeds(std::move(m), eps);
}

// Extremal Rayleigh pair on the orthogonal complement of the constraints.
// The operator is compressed onto an orthonormal complement basis; shifted
// power iteration plus Rayleigh-quotient refinement produces a candidate,
// and a Cholesky bound certificate either confirms it or triggers a
// bisection rescue. The Rayleigh quotient never exceeds the true maximum,
// so value errors are one-sided and bounded by the certificate slack.
EigenPair constrained_max(const SymmetricOperator& a, const std::vector<Vec>& constraints) {
    const std::size_t d = a.dim();
    std::vector<Vec> comp = complement_basis(constraints, d);
    const std::size_t m = comp.size();
    if (m == 0)
        throw std::domain_error("deflated_extremal: constraints leave no complement");

    Matrix b(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        Vec aq = a.apply(comp[j]);
        for (std::size_t i = 0; i < m; ++i) b(i, j) = dot(comp[i], aq);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double avg = 0.5 * (b(i, j) + b(j, i));
            b(i, j) = avg;
            b(j, i) = avg;
        }

    const double shift = max_abs_row_sum(b);  // >= spectral norm of b
    const double eps = 1e-10 * (1.0 + shift);

    CounterRng rng(0x1c3a11e5u, constraints.size());
    Vec y(m);
    for (double& v : y) v = rng.next_gaussian();
    scale(1.0 / norm2(y), y);

    auto rayleigh = [&](const Vec& v) { return dot(matvec(b, v), v); };
    auto power_step = [&](Vec& v) {
        Vec z = matvec(b, v);
        axpy(shift, v, z);
        double n = norm2(z);
        if (n < 1e-300 * (1.0 + shift)) {
            for (double& zi : z) zi = rng.next_gaussian();
            n = norm2(z);
        }
        scale(1.0 / n, z);
        v = std::move(z);
        return rayleigh(v);
    };
    auto residual = [&](const Vec& v, double mu) {
        Vec r = matvec(b, v);
        axpy(-mu, v, r);
        return norm2(r);
    };
    // Rayleigh-quotient inverse iteration, keeping the best residual seen.
    auto polish = [&](Vec v, double mu) {
        double res = residual(v, mu);
        Vec best_v = v;
        double best_mu = mu, best_res = res;
        for (int step = 0; step < 12 && best_res > 1e-15 * (1.0 + shift); ++step) {
            Matrix shifted = b;
            for (std::size_t i = 0; i < m; ++i) shifted(i, i) -= mu;
            Vec z = lu_solve(std::move(shifted), v);
            double n = norm2(z);
            if (!(n > 0.0) || !std::isfinite(n)) break;
            scale(1.0 / n, z);
            v = std::move(z);
            mu = rayleigh(v);
            res = residual(v, mu);
            if (res < best_res) {
                best_res = res;
                best_mu = mu;
                best_v = v;
            } else {
                break;
            }
        }
        return EigenPair{best_mu, std::move(best_v)};
    };

    // Power phase: stop once the Rayleigh quotient drift stays small. Tiny
    // spectral gaps can stall the drift far from the maximum; the
    // certificate below catches exactly that case.
    double rho = rayleigh(y);
    const double enter_polish = 1e-8 * (1.0 + shift);
    std::size_t stable = 0;
    for (std::size_t it = 0; it < kMaxPowerIters && stable < 3; ++it) {
        double next = power_step(y);
        if (std::fabs(next - rho) <= enter_polish) ++stable;
        else stable = 0;
        rho = next;
    }
    EigenPair candidate = polish(y, rho);

    for (int round = 0; round < 8; ++round) {
        if (bounded_above(b, candidate.value, eps)) {
            Vec x(d, 0.0);
            for (std::size_t j = 0; j < m; ++j) axpy(candidate.vector[j], comp[j], x);
            scale(1.0 / norm2(x), x);
            return EigenPair{candidate.value, std::move(x)};
        }
        // lambda_max > candidate.value + eps: localize it by bisection on
        // the certificate, then extract the eigenvector by inverse
        // iteration from just above the localized value.
        double lo = candidate.value, hi = shift + eps;
        while (hi - lo > 1e-13 * (1.0 + shift)) {
            double mid = 0.5 * (lo + hi);
            if (bounded_above(b, mid, eps)) hi = mid;
            else lo = mid;
        }
        Vec v(m);
        for (double& vi : v) vi = rng.next_gaussian();
        scale(1.0 / norm2(v), v);
        for (int step = 0; step < 4; ++step) {
            Matrix shifted = b;
            for (std::size_t i = 0; i < m; ++i) shifted(i, i) -= hi + eps;
            Vec z = lu_solve(std::move(shifted), v);
            double n = norm2(z);
            if (!(n > 0.0) || !std::isfinite(n)) break;
            scale(1.0 / n, z);
            v = std::move(z);
        }
        EigenPair rescued = polish(v, rayleigh(v));
        if (rescued.value <= candidate.value)
            throw std::runtime_error(
                "deflated_extremal: failed to isolate the extremal eigenpair");
        candidate = std::move(rescued);
    }
    throw std::runtime_error("deflated_extremal: failed to isolate the extremal eigenpair");
}

} // namespace

std::optional<EigenPair> deflated_extremal(const SymmetricOperator& a, ExtremalSign sign,
                                           const std::vector<Vec>& constraints,
                                           double zero_tol) {
    if (constraints.size() >= a.dim())
        throw std::domain_error("deflated_extremal: constraint count must be < dim");
    if (zero_tol < 0.0)
        zero_tol = 1e-12 * (1.0 + max_abs_row_sum(a.entries()));

    if (sign == ExtremalSign::Negative) {
        auto flipped = deflated_extremal(a.negated(), ExtremalSign::Positive,
                                         constraints, zero_tol);
        if (!flipped) return std::nullopt;
        flipped->value = -flipped->value;
        return flipped;
    }

    EigenPair pair = constrained_max(a, constraints);
    if (pair.value <= zero_tol) return std::nullopt;  // exhausted
    return pair;
}

SignedSpectrum signed_spectrum(const SymmetricOperator& a, double tol_zero) {
    if (tol_zero < 0.0) tol_zero = 1e-12 * (1.0 + max_abs_row_sum(a.entries()));
    SignedSpectrum s;
    std::vector<Vec> constraints;
    while (constraints.size() < a.dim()) {
        auto pair = deflated_extremal(a, ExtremalSign::Positive, constraints, tol_zero);
        if (!pair) break;
        constraints.push_back(pair->vector);
        s.pos.push_back(std::move(*pair));
    }
    constraints.clear();
    while (s.pos.size() + constraints.size() < a.dim()) {
        auto pair = deflated_extremal(a, ExtremalSign::Negative, constraints, tol_zero);
        if (!pair) break;
        constraints.push_back(pair->vector);
        s.neg.push_back(std::move(*pair));
    }
    if (s.pos.size() + s.neg.size() > a.dim())
        throw std::runtime_error("signed_spectrum: found more eigenvalues than dim");
    s.zero_mult = a.dim() - s.pos.size() - s.neg.size();
    // deflation can surface near-equal eigenvalues slightly out of order
    std::sort(s.pos.begin(), s.pos.end(),
              [](const EigenPair& x, const EigenPair& y) { return x.value > y.value; });
    std::sort(s.neg.begin(), s.neg.end(),
              [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
    return s;
}

double operator_norm(const SymmetricOperator& a) {
    std::vector<Vec> none;
    double hi = constrained_max(a, none).value;
    double lo = -constrained_max(a.negated(), none).value;
    return std::max(std::fabs(hi), std::fabs(lo));
}

OracleSpectrum oracle_spectrum(const SymmetricOperator& op) {
    const std::size_t n = op.dim();
    Matrix a = op.entries();
    Matrix v = Matrix::identity(n);

    double fro = 0.0;
    for (double e : a.data()) fro += e * e;
    fro = std::sqrt(fro);
    const double stop = 1e-14 * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    OracleSpectrum out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

double minmax_value(const SymmetricOperator& a, const std::vector<Vec>& h_list) {
    for (const Vec& h : h_list)
        if (h.size() != a.dim())
            throw std::invalid_argument("minmax_value: constraint dimension mismatch");
    std::vector<Vec> basis = orthonormalize(h_list);
    if (basis.size() != h_list.size())
        throw std::invalid_argument("minmax_value: constraints nearly linearly dependent");
    if (basis.size() >= a.dim())
        throw std::domain_error("minmax_value: constraints span the whole space");

    std::vector<Vec> comp = complement_basis(basis, a.dim());
    const std::size_t m = comp.size();
    Matrix compressed(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        Vec aq = a.apply(comp[j]);
        for (std::size_t i = 0; i < m; ++i) compressed(i, j) = dot(comp[i], aq);
    }
    // enforce exact symmetry against roundoff before validation
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double avg = 0.5 * (compressed(i, j) + compressed(j, i));
            compressed(i, j) = avg;
            compressed(j, i) = avg;
        }
    return oracle_spectrum(SymmetricOperator(std::move(compressed))).values.front();
}

double decomposition_residual(const SymmetricOperator& a, const SignedSpectrum& spectrum,
                              std::span<const double> x) {
    Vec r = a.apply(x);
    for (const auto& list : {std::cref(spectrum.pos), std::cref(spectrum.neg)})
        for (const EigenPair& p : list.get())
            axpy(-p.value * dot(p.vector, x), p.vector, r);
    return norm2(r);
}

double decomposition_residual(const SymmetricOperator& a, std::span<const double> x) {
    return decomposition_residual(a, signed_spectrum(a), x);
}

} // namespace bmspec
