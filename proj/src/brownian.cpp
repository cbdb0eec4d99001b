#include "bmspec/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace bmspec {

namespace {

std::size_t nodes_for(int level, int horizon) {
    return static_cast<std::size_t>(horizon) * (std::size_t{1} << level) + 1;
}

} // namespace

DyadicPath::DyadicPath(int level, int horizon, std::size_t dim)
    : level_(level), horizon_(horizon), dim_(dim) {
    if (level < 0) throw std::invalid_argument("DyadicPath: level >= 0 required");
    if (horizon < 1) throw std::invalid_argument("DyadicPath: horizon >= 1 required");
    node_count_ = nodes_for(level, horizon);
    values_.assign(node_count_ * dim_, 0.0);
}

Vec DyadicPath::at(double t) const {
    if (t < 0.0 || t > static_cast<double>(horizon_))
        throw std::domain_error("DyadicPath::at: t outside [0, horizon]");
    double scaled = t * static_cast<double>(std::size_t{1} << level_);
    auto k = static_cast<std::size_t>(scaled);
    if (k >= node_count_ - 1) k = node_count_ - 2;
    double frac = scaled - static_cast<double>(k);
    auto lo = node(k);
    if (frac == 0.0) return Vec(lo.begin(), lo.end());
    auto hi = node(k + 1);
    Vec out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = lo[i] + frac * (hi[i] - lo[i]);
    return out;
}

DyadicPath build_path(const GaussianMeasure& gamma, int horizon, int level,
                      CounterRng& rng) {
    DyadicPath path(level, horizon, gamma.dim());
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << level));
    Vec g(gamma.dim());
    for (std::size_t k = 1; k < path.node_count(); ++k) {
        gamma.sample_into(rng, g);
        auto prev = path.node(k - 1);
        auto cur = path.node(k);
        for (std::size_t i = 0; i < gamma.dim(); ++i)
            cur[i] = prev[i] + g[i] * inv_sqrt;
    }
    return path;
}

DyadicPath coarsen(const DyadicPath& path) {
    if (path.level() < 1) throw std::domain_error("coarsen: level >= 1 required");
    DyadicPath out(path.level() - 1, path.horizon(), path.dim());
    for (std::size_t k = 0; k < out.node_count(); ++k) {
        auto src = path.node(2 * k);
        auto dst = out.node(k);
        for (std::size_t i = 0; i < path.dim(); ++i) dst[i] = src[i];
    }
    return out;
}

double sup_deviation(const DyadicPath& path, const NormSpec& q) {
    if (path.level() < 1) throw std::domain_error("sup_deviation: level >= 1 required");
    // difference to the coarsened path vanishes at even nodes and is linear
    // in between, so the sup sits at the odd nodes
    const std::size_t d = path.dim();
    Vec diff(d);
    double sup = 0.0;
    for (std::size_t k = 1; k < path.node_count(); k += 2) {
        auto lo = path.node(k - 1);
        auto mid = path.node(k);
        auto hi = path.node(k + 1);
        for (std::size_t i = 0; i < d; ++i) diff[i] = mid[i] - 0.5 * (lo[i] + hi[i]);
        sup = std::max(sup, q(diff));
    }
    return sup;
}

double tail_certificate(int horizon, int level, double delta, double r, double m_r) {
    if (delta <= 0.0) throw std::domain_error("tail_certificate: delta > 0 required");
    if (r <= 0.0) throw std::domain_error("tail_certificate: r > 0 required");
    if (m_r < 0.0) throw std::domain_error("tail_certificate: m_r >= 0 required");
    return static_cast<double>(horizon) *
           std::pow(2.0, static_cast<double>(level) * (1.0 - r / 2.0)) *
           std::pow(2.0 / delta, r) * m_r;
}

namespace {

DeviationResult finish_deviation(const std::vector<unsigned char>& exceeded,
                                 int horizon, int level, double delta, double r,
                                 double m_r) {
    DeviationResult res;
    res.trials = exceeded.size();
    for (unsigned char e : exceeded) res.exceed_count += e;
    const auto n = static_cast<double>(res.trials);
    res.empirical_freq = static_cast<double>(res.exceed_count) / n;
    res.std_error = std::sqrt(res.empirical_freq * (1.0 - res.empirical_freq) / n);
    res.certificate = tail_certificate(horizon, level, delta, r, m_r);
    res.verdict = res.empirical_freq <= res.certificate + 3.0 * res.std_error;
    return res;
}

template <bool Parallel>
DeviationResult run_deviation(const GaussianMeasure& gamma, int horizon, int level,
                              double delta, double r, double m_r, std::size_t trials,
                              std::uint64_t seed, std::uint64_t stream) {
    if (trials < 1) throw std::invalid_argument("deviation_experiment: trials >= 1");
    if (level < 1) throw std::invalid_argument("deviation_experiment: level >= 1");
    std::vector<unsigned char> exceeded(trials, 0);
    const auto n = static_cast<long long>(trials);
#pragma omp parallel for schedule(static) if (Parallel)
    for (long long t = 0; t < n; ++t) {
        CounterRng rng(seed, substream(stream, static_cast<std::uint64_t>(t)));
        DyadicPath path = build_path(gamma, horizon, level, rng);
        exceeded[static_cast<std::size_t>(t)] =
            sup_deviation(path, gamma.norm()) >= delta ? 1 : 0;
    }
    return finish_deviation(exceeded, horizon, level, delta, r, m_r);
}

} // namespace

DeviationResult deviation_experiment(const GaussianMeasure& gamma, int horizon,
                                     int level, double delta, double r, double m_r,
                                     std::size_t trials, std::uint64_t seed,
                                     std::uint64_t stream) {
    return run_deviation<true>(gamma, horizon, level, delta, r, m_r, trials, seed, stream);
}

DeviationResult deviation_experiment_serial(const GaussianMeasure& gamma, int horizon,
                                            int level, double delta, double r,
                                            double m_r, std::size_t trials,
                                            std::uint64_t seed, std::uint64_t stream) {
    return run_deviation<false>(gamma, horizon, level, delta, r, m_r, trials, seed, stream);
}

namespace {

struct GridInterval {
    std::size_t lo = 0, hi = 0;
};

std::vector<GridInterval> to_grid(const std::vector<DyadicInterval>& intervals,
                                  int horizon, int level) {
    const double scale = static_cast<double>(std::size_t{1} << level);
    std::vector<GridInterval> grid;
    grid.reserve(intervals.size());
    for (const auto& iv : intervals) {
        double lo = iv.start * scale, hi = iv.end * scale;
        double lo_r = std::round(lo), hi_r = std::round(hi);
        if (std::fabs(lo - lo_r) > 1e-9 || std::fabs(hi - hi_r) > 1e-9)
            throw std::domain_error("increment_statistics: endpoints must be dyadic at level <= N");
        if (lo_r < 0.0 || hi_r > static_cast<double>(horizon) * scale)
            throw std::domain_error("increment_statistics: interval outside [0, horizon]");
        if (hi_r <= lo_r)
            throw std::domain_error("increment_statistics: empty or reversed interval");
        grid.push_back({static_cast<std::size_t>(lo_r), static_cast<std::size_t>(hi_r)});
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
            if (grid[i].lo < grid[j].hi && grid[j].lo < grid[i].hi)
                throw std::domain_error("increment_statistics: intervals overlap");
    return grid;
}

template <bool Parallel>
IncrementStats run_increments(const GaussianMeasure& gamma, int horizon, int level,
                              const std::vector<DyadicInterval>& intervals,
                              std::size_t trials, std::uint64_t seed,
                              std::uint64_t stream) {
    if (trials < 1) throw std::invalid_argument("increment_statistics: trials >= 1");
    const auto grid = to_grid(intervals, horizon, level);
    const std::size_t d = gamma.dim(), m = grid.size();

    // per-trial increments, trial-major so parallel fill is deterministic
    std::vector<double> incs(trials * m * d, 0.0);
    const auto n = static_cast<long long>(trials);
#pragma omp parallel for schedule(static) if (Parallel)
    for (long long t = 0; t < n; ++t) {
        CounterRng rng(seed, substream(stream, static_cast<std::uint64_t>(t)));
        DyadicPath path = build_path(gamma, horizon, level, rng);
        double* slot = incs.data() + static_cast<std::size_t>(t) * m * d;
        for (std::size_t k = 0; k < m; ++k) {
            auto lo = path.node(grid[k].lo);
            auto hi = path.node(grid[k].hi);
            for (std::size_t i = 0; i < d; ++i) slot[k * d + i] = hi[i] - lo[i];
        }
    }

    IncrementStats stats;
    stats.trials = trials;
    const double dn = static_cast<double>(trials);
    stats.means.assign(m, Vec(d, 0.0));
    for (std::size_t t = 0; t < trials; ++t)
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < d; ++i)
                stats.means[k][i] += incs[(t * m + k) * d + i] / dn;

    auto moment_pair = [&](std::size_t ka, std::size_t kb) {
        // mean and standard error of products (xa_i - mean)(xb_j - mean)
        Matrix cov(d, d), se(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double sum = 0.0, sumsq = 0.0;
                for (std::size_t t = 0; t < trials; ++t) {
                    double a = incs[(t * m + ka) * d + i] - stats.means[ka][i];
                    double b = incs[(t * m + kb) * d + j] - stats.means[kb][j];
                    double p = a * b;
                    sum += p;
                    sumsq += p * p;
                }
                double mean = sum / dn;
                double var = sumsq / dn - mean * mean;
                cov(i, j) = mean;
                se(i, j) = std::sqrt(std::max(var, 0.0) / dn);
            }
        return std::pair{cov, se};
    };

    for (std::size_t k = 0; k < m; ++k) {
        auto [cov, se] = moment_pair(k, k);
        stats.covariances.push_back(std::move(cov));
        stats.cov_std_errors.push_back(std::move(se));
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            auto [cov, se] = moment_pair(i, j);
            stats.cross_covariances.push_back(std::move(cov));
            stats.cross_std_errors.push_back(std::move(se));
        }
    return stats;
}

} // namespace

IncrementStats increment_statistics(const GaussianMeasure& gamma, int horizon,
                                    int level, const std::vector<DyadicInterval>& intervals,
                                    std::size_t trials, std::uint64_t seed,
                                    std::uint64_t stream) {
    return run_increments<true>(gamma, horizon, level, intervals, trials, seed, stream);
}

IncrementStats increment_statistics_serial(const GaussianMeasure& gamma, int horizon,
                                           int level,
                                           const std::vector<DyadicInterval>& intervals,
                                           std::size_t trials, std::uint64_t seed,
                                           std::uint64_t stream) {
    return run_increments<false>(gamma, horizon, level, intervals, trials, seed, stream);
}

SupportCheckResult support_check(const GaussianMeasure& gamma, int horizon, int level,
                                 std::size_t paths, std::uint64_t seed,
                                 std::uint64_t stream) {
    if (gamma.rank() >= gamma.dim())
        throw std::domain_error("support_check: covariance must be rank deficient");
    SupportCheckResult res;
    for (std::size_t p = 0; p < paths; ++p) {
        CounterRng rng(seed, substream(stream, p));
        DyadicPath path = build_path(gamma, horizon, level, rng);
        for (std::size_t k = 0; k < path.node_count(); ++k) {
            auto v = path.node(k);
            res.max_residual = std::max(res.max_residual, gamma.residual_to_support(v));
            res.max_grid_norm = std::max(res.max_grid_norm, norm2(v));
        }
    }
    return res;
}

} // namespace bmspec
