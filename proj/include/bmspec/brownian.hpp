#pragma once

#include <cstdint>
#include <vector>

#include "bmspec/gaussian.hpp"

namespace bmspec {

// Piecewise-linear path on [0, horizon] with nodes at the level-N dyadic
// grid. Node k stores the value at t = k / 2^level; between nodes the path
// is linear. values is row-major: node index major, coordinate minor.
class DyadicPath {
public:
    DyadicPath(int level, int horizon, std::size_t dim);

    int level() const { return level_; }
    int horizon() const { return horizon_; }
    std::size_t dim() const { return dim_; }
    std::size_t node_count() const { return node_count_; }

    std::span<double> node(std::size_t k) { return {values_.data() + k * dim_, dim_}; }
    std::span<const double> node(std::size_t k) const {
        return {values_.data() + k * dim_, dim_};
    }

    Vec at(double t) const;  // linear interpolation, exact at grid points

    const std::vector<double>& values() const { return values_; }

private:
    int level_, horizon_;
    std::size_t dim_, node_count_;
    std::vector<double> values_;
};

// Scaled random-walk path: node k holds (G_1 + ... + G_k) / sqrt(2^N).
DyadicPath build_path(const GaussianMeasure& gamma, int horizon, int level,
                      CounterRng& rng);

// One level down: keep values at even node indices.
DyadicPath coarsen(const DyadicPath& path);

// Exact sup over [0, horizon] of q(path - coarsen(path)), attained at the
// odd level-N nodes since the difference is piecewise linear and vanishes
// at the coarse grid.
double sup_deviation(const DyadicPath& path, const NormSpec& q);

// Markov bound b * 2^{N(1 - r/2)} * (2/delta)^r * m_r on the probability
// that the refinement deviation reaches delta.
double tail_certificate(int horizon, int level, double delta, double r, double m_r);

struct DeviationResult {
    std::size_t trials = 0;
    std::size_t exceed_count = 0;
    double empirical_freq = 0.0;
    double std_error = 0.0;  // binomial
    double certificate = 0.0;
    bool verdict = false;  // empirical_freq <= certificate + 3 std errors
};

// Frequency of {sup deviation >= delta} over independent paths, against the
// tail certificate computed from (r, m_r).
DeviationResult deviation_experiment(const GaussianMeasure& gamma, int horizon,
                                     int level, double delta, double r, double m_r,
                                     std::size_t trials, std::uint64_t seed,
                                     std::uint64_t stream = 0);

// Serial reference for the parallel trial loop above; identical output.
DeviationResult deviation_experiment_serial(const GaussianMeasure& gamma, int horizon,
                                            int level, double delta, double r,
                                            double m_r, std::size_t trials,
                                            std::uint64_t seed, std::uint64_t stream = 0);

struct DyadicInterval {
    double start = 0.0;
    double end = 0.0;
};

struct IncrementStats {
    std::vector<Vec> means;            // per interval, length d
    std::vector<Matrix> covariances;   // per interval, d x d
    std::vector<Matrix> cov_std_errors;
    // flattened upper triangle of pairs (i < j), each d x d
    std::vector<Matrix> cross_covariances;
    std::vector<Matrix> cross_std_errors;
    std::size_t trials = 0;
};

// Empirical law of increments over disjoint dyadic intervals, for comparison
// with (t - s) * sigma and zero cross-covariance.
IncrementStats increment_statistics(const GaussianMeasure& gamma, int horizon,
                                    int level, const std::vector<DyadicInterval>& intervals,
                                    std::size_t trials, std::uint64_t seed,
                                    std::uint64_t stream = 0);

IncrementStats increment_statistics_serial(const GaussianMeasure& gamma, int horizon,
                                           int level,
                                           const std::vector<DyadicInterval>& intervals,
                                           std::size_t trials, std::uint64_t seed,
                                           std::uint64_t stream = 0);

struct SupportCheckResult {
    double max_residual = 0.0;
    double max_grid_norm = 0.0;  // max Euclidean norm over all grid values
};

// Max distance of any grid value to range(sigma), over freshly built paths.
// Only meaningful for rank-deficient measures; full rank is rejected.
SupportCheckResult support_check(const GaussianMeasure& gamma, int horizon, int level,
                                 std::size_t paths, std::uint64_t seed,
                                 std::uint64_t stream = 0);

} // namespace bmspec
