#include "bmspec/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace bmspec {

NormKind norm_kind_from_string(const std::string& s) {
    if (s == "l1") return NormKind::L1;
    if (s == "l2") return NormKind::L2;
    if (s == "linf") return NormKind::LInf;
    if (s == "weighted-sup") return NormKind::WeightedSup;
    throw std::invalid_argument("unknown norm kind: " + s);
}

std::string to_string(NormKind k) {
    switch (k) {
        case NormKind::L1: return "l1";
        case NormKind::L2: return "l2";
        case NormKind::LInf: return "linf";
        case NormKind::WeightedSup: return "weighted-sup";
    }
    return "?";
}

NormSpec::NormSpec(NormKind kind, std::vector<double> weights)
    : kind_(kind), weights_(std::move(weights)) {
    if (kind_ == NormKind::WeightedSup) {
        if (weights_.empty())
            throw std::invalid_argument("weighted-sup norm needs weights");
        for (double w : weights_)
            if (!(w > 0.0))
                throw std::invalid_argument("weighted-sup weights must be positive");
    } else if (!weights_.empty()) {
        throw std::invalid_argument("weights only valid for weighted-sup");
    }
}

double NormSpec::operator()(std::span<const double> x) const {
    double v = 0.0;
    switch (kind_) {
        case NormKind::L1:
            for (double xi : x) v += std::fabs(xi);
            return v;
        case NormKind::L2:
            for (double xi : x) v += xi * xi;
            return std::sqrt(v);
        case NormKind::LInf:
            for (double xi : x) v = std::max(v, std::fabs(xi));
            return v;
        case NormKind::WeightedSup:
            if (x.size() != weights_.size())
                throw std::invalid_argument("weighted-sup: dimension mismatch");
            for (std::size_t i = 0; i < x.size(); ++i)
                v = std::max(v, weights_[i] * std::fabs(x[i]));
            return v;
    }
    return v;
}

GaussianMeasure::GaussianMeasure(Matrix covariance, NormSpec norm)
    : covariance_(std::move(covariance)), norm_(std::move(norm)) {
    const std::size_t d = covariance_.rows();
    if (covariance_.cols() != d)
        throw std::invalid_argument("covariance must be square");
    const double scale = max_abs(covariance_);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::fabs(covariance_(i, j) - covariance_(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("covariance not symmetric");
    factor_ = pivoted_cholesky(covariance_);

    std::vector<Vec> cols(factor_.cols(), Vec(d));
    for (std::size_t j = 0; j < factor_.cols(); ++j)
        for (std::size_t i = 0; i < d; ++i) cols[j][i] = factor_(i, j);
    range_basis_ = orthonormalize(std::move(cols));
}

Vec GaussianMeasure::sample(CounterRng& rng) const {
    Vec out(dim());
    sample_into(rng, out);
    return out;
}

void GaussianMeasure::sample_into(CounterRng& rng, std::span<double> out) const {
    const std::size_t d = dim(), r = rank();
    Vec z(r);
    for (std::size_t j = 0; j < r; ++j) z[j] = rng.next_gaussian();
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < r; ++j) s += factor_(i, j) * z[j];
        out[i] = s;
    }
}

GaussianMeasure GaussianMeasure::scaled(double s) const {
    if (s < 0.0) throw std::domain_error("scale_measure: s must be nonnegative");
    Matrix cov = covariance_;
    for (double& v : cov.data()) v *= s;
    return GaussianMeasure(std::move(cov), norm_);
}

double GaussianMeasure::residual_to_support(std::span<const double> x) const {
    Vec r(x.begin(), x.end());
    project_out(range_basis_, r);
    return norm2(r);
}

MomentEstimate empirical_q_moment(const GaussianMeasure& gamma, double r,
                                  std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream) {
    if (n < 1) throw std::invalid_argument("empirical_q_moment: n >= 1 required");
    CounterRng rng(seed, stream);
    double sum = 0.0, sumsq = 0.0;
    Vec g(gamma.dim());
    for (std::size_t i = 0; i < n; ++i) {
        gamma.sample_into(rng, g);
        double q = gamma.norm()(g);
        double v = std::pow(q, r);
        sum += v;
        sumsq += v * v;
    }
    MomentEstimate est;
    est.samples = n;
    est.value = sum / static_cast<double>(n);
    double var = sumsq / static_cast<double>(n) - est.value * est.value;
    est.std_error = n > 1 ? std::sqrt(std::max(var, 0.0) / static_cast<double>(n)) : 0.0;
    return est;
}

} // namespace bmspec
