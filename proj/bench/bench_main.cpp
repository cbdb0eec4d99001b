// Timing comparison of the OpenMP trial loops against their serial
// reference implementations, with a result-equality check.

#include <chrono>
#include <cstdio>

#include "bmspec/brownian.hpp"
#include "bmspec/perturbation.hpp"

using namespace bmspec;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
    GaussianMeasure gamma(Matrix::identity(3), NormSpec(NormKind::L2));
    const std::uint64_t seed = 42;

    DeviationResult par, ser;
    double t_par = time_ms([&] {
        par = deviation_experiment(gamma, 1, 10, 0.4, 4.0, 9.0, 20000, seed);
    });
    double t_ser = time_ms([&] {
        ser = deviation_experiment_serial(gamma, 1, 10, 0.4, 4.0, 9.0, 20000, seed);
    });
    bool dev_equal = par.exceed_count == ser.exceed_count &&
                     par.empirical_freq == ser.empirical_freq;
    std::printf("deviation_experiment  parallel %8.1f ms  serial %8.1f ms  speedup %.2fx  equal %s\n",
                t_par, t_ser, t_ser / t_par, dev_equal ? "yes" : "NO");

    SuiteConfig config;
    config.dims = {10, 25};
    config.pairs_per_cell = 10;
    config.seed = seed;
    SuiteResult spar, sser;
    double t_spar = time_ms([&] { spar = run_suite(config); });
    double t_sser = time_ms([&] { sser = run_suite_serial(config); });
    bool suite_equal = spar.total == sser.total && spar.passed == sser.passed &&
                       spar.worst_slack == sser.worst_slack;
    std::printf("perturbation suite    parallel %8.1f ms  serial %8.1f ms  speedup %.2fx  equal %s\n",
                t_spar, t_sser, t_sser / t_spar, suite_equal ? "yes" : "NO");

    return dev_equal && suite_equal ? 0 : 1;
}
