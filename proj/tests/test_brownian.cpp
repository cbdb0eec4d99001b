#include <doctest.h>

#include <cmath>

#include "bmspec/brownian.hpp"

using namespace bmspec;

namespace {

GaussianMeasure identity_measure(std::size_t d) {
    return GaussianMeasure(Matrix::identity(d), NormSpec(NormKind::L2));
}

GaussianMeasure point_mass(std::size_t d) {
    return GaussianMeasure(Matrix(d, d), NormSpec(NormKind::L2));
}

} // namespace

TEST_CASE("point-mass measure builds the zero path") {
    auto gamma = point_mass(2);
    CounterRng rng(1, 0);
    DyadicPath path = build_path(gamma, 2, 3, rng);
    for (double v : path.values()) CHECK(v == 0.0);
}

TEST_CASE("level 0, horizon 1: one sample step from zero") {
    auto gamma = identity_measure(1);
    CounterRng rng(2, 0);
    DyadicPath path = build_path(gamma, 1, 0, rng);
    CHECK(path.node_count() == 2);
    CHECK(path.node(0)[0] == 0.0);
    CounterRng replay(2, 0);
    CHECK(path.node(1)[0] == gamma.sample(replay)[0]);
}

TEST_CASE("terminal variance matches the scaled-walk law") {
    auto gamma = identity_measure(1);
    const int n = 10000;
    double sumsq = 0.0, sum4 = 0.0;
    for (int t = 0; t < n; ++t) {
        CounterRng rng(3, substream(0, static_cast<std::uint64_t>(t)));
        DyadicPath path = build_path(gamma, 1, 10, rng);
        double x = path.node(path.node_count() - 1)[0];
        sumsq += x * x;
        sum4 += x * x * x * x;
    }
    double var = sumsq / n;
    double se = std::sqrt((sum4 / n - var * var) / n);
    CHECK(std::fabs(var - 1.0) < 5.0 * se);
}

TEST_CASE("interpolation is exact at grid nodes and linear between") {
    auto gamma = identity_measure(1);
    CounterRng rng(4, 0);
    DyadicPath path = build_path(gamma, 1, 2, rng);
    CHECK(path.at(0.25)[0] == path.node(1)[0]);
    double mid = path.at(0.375)[0];
    CHECK(mid == doctest::Approx(0.5 * (path.node(1)[0] + path.node(2)[0])).epsilon(1e-15));
    CHECK_THROWS_AS(path.at(-0.1), std::domain_error);
    CHECK_THROWS_AS(path.at(1.1), std::domain_error);
}

TEST_CASE("coarsen keeps even-index values bit-exactly") {
    auto gamma = identity_measure(2);
    CounterRng rng(5, 0);
    DyadicPath path = build_path(gamma, 1, 4, rng);
    DyadicPath coarse = coarsen(path);
    CHECK(coarse.level() == 3);
    for (std::size_t k = 0; k < coarse.node_count(); ++k)
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(coarse.node(k)[i] == path.node(2 * k)[i]);

    DyadicPath coarse2 = coarsen(coarse);
    for (std::size_t k = 0; k < coarse2.node_count(); ++k)
        CHECK(coarse2.node(k)[0] == path.node(4 * k)[0]);
}

TEST_CASE("coarsen rejects level-0 paths") {
    DyadicPath flat(0, 1, 1);
    CHECK_THROWS_AS(coarsen(flat), std::domain_error);
    CHECK_THROWS_AS(sup_deviation(flat, NormSpec(NormKind::L2)), std::domain_error);
}

TEST_CASE("hand-computed sup deviation: tent path [0, 1, 0]") {
    DyadicPath path(1, 1, 1);
    path.node(1)[0] = 1.0;
    // coarse path is zero at both endpoints, so the gap at t = 1/2 is 1
    CHECK(sup_deviation(path, NormSpec(NormKind::LInf)) == 1.0);
}

TEST_CASE("sup deviation vanishes when the path is linear on coarse intervals") {
    DyadicPath path(1, 1, 1);
    path.node(1)[0] = 0.5;
    path.node(2)[0] = 1.0;
    CHECK(sup_deviation(path, NormSpec(NormKind::L2)) == 0.0);
}

TEST_CASE("chained inequality: sup deviation <= 2 max increment norm") {
    NormSpec q(NormKind::L1);
    GaussianMeasure gamma_q(Matrix::identity(3), q);
    for (int t = 0; t < 100; ++t) {
        CounterRng rng(6, substream(1, static_cast<std::uint64_t>(t)));
        DyadicPath path = build_path(gamma_q, 1, 5, rng);
        double max_inc = 0.0;
        Vec inc(3);
        for (std::size_t k = 1; k < path.node_count(); ++k) {
            for (std::size_t i = 0; i < 3; ++i)
                inc[i] = path.node(k)[i] - path.node(k - 1)[i];
            max_inc = std::max(max_inc, q(inc));
        }
        CHECK(sup_deviation(path, q) <= 2.0 * max_inc);
    }
}

TEST_CASE("tail certificate closed forms") {
    // r=4, delta=2^{-N/8}: b 2^{N(1-2)} (2 delta^{-1})^4 m = 16 b m 2^{-N/2}
    for (int level : {4, 8, 12}) {
        double delta = std::pow(2.0, -level / 8.0);
        double m4 = 2.7;
        double expected = 16.0 * 3.0 * m4 * std::pow(2.0, -level / 2.0);
        CHECK(tail_certificate(3, level, delta, 4.0, m4) ==
              doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(tail_certificate(1, 0, 2.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(tail_certificate(5, 9, 0.1, 3.0, 0.0) == 0.0);
    CHECK_THROWS_AS(tail_certificate(1, 1, -0.5, 4.0, 1.0), std::domain_error);
}

TEST_CASE("tail certificate monotonicity") {
    double base = tail_certificate(1, 6, 0.5, 4.0, 2.0);
    CHECK(tail_certificate(1, 6, 0.25, 4.0, 2.0) > base);   // smaller delta, larger bound
    CHECK(tail_certificate(1, 8, 0.5, 4.0, 2.0) < base);    // deeper level, smaller (r > 2)
    CHECK(tail_certificate(2, 6, 0.5, 4.0, 2.0) == doctest::Approx(2.0 * base));
    CHECK(tail_certificate(1, 6, 0.5, 4.0, 4.0) == doctest::Approx(2.0 * base));
}

TEST_CASE("deviation experiment: point mass never deviates") {
    auto res = deviation_experiment(point_mass(2), 1, 3, 0.01, 4.0, 0.0, 100, 11);
    CHECK(res.empirical_freq == 0.0);
    CHECK(res.verdict);
}

TEST_CASE("deviation experiment: certificate dominates at moderate level") {
    auto res = deviation_experiment(identity_measure(1), 1, 8, 0.5, 4.0, 3.0, 10000, 12);
    CHECK(res.verdict);
}

TEST_CASE("deviation experiment: huge threshold is never reached") {
    auto res = deviation_experiment(identity_measure(1), 1, 5, 1000.0, 4.0, 3.0, 500, 13);
    CHECK(res.empirical_freq == 0.0);
}

TEST_CASE("parallel and serial deviation experiments agree exactly") {
    auto par = deviation_experiment(identity_measure(2), 1, 6, 0.3, 4.0, 8.0, 2000, 14);
    auto ser = deviation_experiment_serial(identity_measure(2), 1, 6, 0.3, 4.0, 8.0, 2000, 14);
    CHECK(par.exceed_count == ser.exceed_count);
    CHECK(par.empirical_freq == ser.empirical_freq);
    CHECK(par.certificate == ser.certificate);
}

TEST_CASE("increment covariance matches (t - s) sigma") {
    auto gamma = identity_measure(1);
    auto stats = increment_statistics(gamma, 1, 6, {{0.0, 1.0}}, 10000, 15);
    double got = stats.covariances[0](0, 0);
    double se = stats.cov_std_errors[0](0, 0);
    CHECK(std::fabs(got - 1.0) < 5.0 * se);
}

TEST_CASE("disjoint increments are uncorrelated") {
    auto gamma = identity_measure(2);
    auto stats = increment_statistics(gamma, 1, 6, {{0.0, 0.5}, {0.5, 1.0}}, 10000, 16);
    REQUIRE(stats.cross_covariances.size() == 1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            double got = stats.cross_covariances[0](i, j);
            double se = stats.cross_std_errors[0](i, j);
            CHECK(std::fabs(got) < 5.0 * se);
        }
    // marginal covariance of each half-interval is (1/2) I
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i) {
            double got = stats.covariances[k](i, i);
            double se = stats.cov_std_errors[k](i, i);
            CHECK(std::fabs(got - 0.5) < 5.0 * se);
        }
}

TEST_CASE("increment statistics reject bad intervals") {
    auto gamma = identity_measure(1);
    CHECK_THROWS_AS(increment_statistics(gamma, 1, 3, {{0.25, 0.25}}, 10, 1),
                    std::domain_error);
    CHECK_THROWS_AS(increment_statistics(gamma, 1, 3, {{0.1, 0.3}}, 10, 1),
                    std::domain_error);
    CHECK_THROWS_AS(increment_statistics(gamma, 1, 3, {{0.0, 0.5}, {0.25, 0.75}}, 10, 1),
                    std::domain_error);
    CHECK_THROWS_AS(increment_statistics(gamma, 1, 3, {{0.5, 0.25}}, 10, 1),
                    std::domain_error);
}

TEST_CASE("increment statistics serial reference agrees") {
    auto gamma = identity_measure(2);
    auto par = increment_statistics(gamma, 1, 4, {{0.0, 0.5}, {0.5, 1.0}}, 500, 17);
    auto ser = increment_statistics_serial(gamma, 1, 4, {{0.0, 0.5}, {0.5, 1.0}}, 500, 17);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(par.covariances[k].data()[i] == ser.covariances[k].data()[i]);
}

TEST_CASE("support check: diagonal rank-1 covariance in d=2") {
    Matrix sigma(2, 2);
    sigma(0, 0) = 1.0;
    GaussianMeasure gamma(sigma, NormSpec(NormKind::L2));
    auto res = support_check(gamma, 1, 4, 20, 18);
    CHECK(res.max_residual <= 1e-12 * std::max(res.max_grid_norm, 1.0));
}

TEST_CASE("support check rejects full-rank covariance") {
    auto gamma = identity_measure(2);
    CHECK_THROWS_AS(support_check(gamma, 1, 3, 5, 1), std::domain_error);
}

TEST_CASE("paths replay bit-identically for identical seeds") {
    auto gamma = identity_measure(3);
    CounterRng a(99, 5), b(99, 5);
    DyadicPath pa = build_path(gamma, 1, 6, a);
    DyadicPath pb = build_path(gamma, 1, 6, b);
    CHECK(pa.values() == pb.values());
}
