#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bmspec/linalg.hpp"
#include "bmspec/rng.hpp"

namespace bmspec {

enum class NormKind { L1, L2, LInf, WeightedSup };

NormKind norm_kind_from_string(const std::string& s);
std::string to_string(NormKind k);

// A Banach norm on R^d. weights are only used for WeightedSup.
class NormSpec {
public:
    explicit NormSpec(NormKind kind, std::vector<double> weights = {});

    NormKind kind() const { return kind_; }
    const std::vector<double>& weights() const { return weights_; }

    double operator()(std::span<const double> x) const;

private:
    NormKind kind_;
    std::vector<double> weights_;
};

// Centered Gaussian law on R^d given by a PSD covariance. Samples are
// factor * z with z standard normal of length rank(covariance), so they
// live exactly in the range of the covariance.
class GaussianMeasure {
public:
    GaussianMeasure(Matrix covariance, NormSpec norm);

    std::size_t dim() const { return covariance_.rows(); }
    std::size_t rank() const { return factor_.cols(); }
    const Matrix& covariance() const { return covariance_; }
    const Matrix& factor() const { return factor_; }
    const NormSpec& norm() const { return norm_; }

    Vec sample(CounterRng& rng) const;
    void sample_into(CounterRng& rng, std::span<double> out) const;

    // law of the same measure scaled in space by sqrt(s): covariance s*sigma
    GaussianMeasure scaled(double s) const;

    // max Euclidean distance from x to range(covariance)
    double residual_to_support(std::span<const double> x) const;

private:
    Matrix covariance_;
    Matrix factor_;
    std::vector<Vec> range_basis_;  // orthonormal basis of range(factor)
    NormSpec norm_;
};

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;

    // estimate plus three standard errors, what certificates consume
    double conservative() const { return value + 3.0 * std_error; }
};

// Monte Carlo estimate of E q(G)^r.
MomentEstimate empirical_q_moment(const GaussianMeasure& gamma, double r,
                                  std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream = 0);

} // namespace bmspec
