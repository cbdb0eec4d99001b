// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are fixed here, including every tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bmspec/brownian.hpp"
#include "bmspec/gaussian.hpp"
#include "bmspec/perturbation.hpp"
#include "bmspec/spectral.hpp"

using namespace bmspec;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const char* title, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, title,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<SymmetricOperator, SymmetricOperator>> make_pairs(
    std::uint64_t seed, std::size_t count) {
    const std::vector<std::size_t> dims{2, 5, 10, 25, 50};
    const auto& profiles = all_profiles();
    std::vector<std::pair<SymmetricOperator, SymmetricOperator>> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        pairs.push_back(random_operator_pair(seed, i, dims[i % dims.size()],
                                             profiles[(i / dims.size()) % profiles.size()]));
    return pairs;
}

// --- criterion 1: deflation solver vs Jacobi oracle -------------------------

void criterion_oracle_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    auto pairs = make_pairs(2024, 200);
    CounterRng xrng(555, 0);
    for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
        const SymmetricOperator& a = pairs[i].first;
        const std::size_t d = a.dim();
        auto mine = signed_spectrum(a);
        auto oracle = oracle_spectrum(a);
        double norm =
            std::max(std::fabs(oracle.values.front()), std::fabs(oracle.values.back()));
        auto vals = mine.all_values(d);
        for (std::size_t k = 0; k < d; ++k)
            if (std::fabs(vals[k] - oracle.values[k]) > 1e-8 * norm) {
                ok = false;
                detail = "eigenvalue multiset mismatch at operator " + std::to_string(i);
            }
        for (int t = 0; t < 100 && ok; ++t) {
            Vec x(d);
            for (double& v : x) v = xrng.next_gaussian();
            if (decomposition_residual(a, mine, x) > 1e-8 * norm * norm2(x)) {
                ok = false;
                detail = "decomposition residual too large at operator " + std::to_string(i);
            }
        }
    }
    double secs = elapsed_s(t0);
    if (ok && secs >= 60.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + " s over the 60 s budget";
    }
    report(1, "oracle equivalence of signed_spectrum on 200 operators", ok, detail);
}

// --- criterion 2: min-max suite ---------------------------------------------

void criterion_theorem1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    CounterRng hrng(777, 0);
    for (std::size_t i = 0; i < 50 && ok; ++i) {
        const std::size_t d = 2 + i % 11;  // dims 2..12
        auto [a, unused] = random_operator_pair(4096, i, d, PairProfile::Generic);
        auto s = signed_spectrum(a);
        double norm = operator_norm(a);
        for (std::size_t n = 1; n <= s.pos.size() && ok; ++n) {
            // equality at the true eigenvectors (2.1.8)
            std::vector<Vec> phis;
            for (std::size_t k = 0; k + 1 < n; ++k) phis.push_back(s.pos[k].vector);
            if (std::fabs(minmax_value(a, phis) - s.pos[n - 1].value) > 1e-9 * norm) {
                ok = false;
                detail = "equality (2.1.8) violated, operator " + std::to_string(i);
                break;
            }
            for (int t = 0; t < 500; ++t) {
                std::vector<Vec> h;
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    Vec v(d);
                    for (double& e : v) e = hrng.next_gaussian();
                    h.push_back(std::move(v));
                }
                if (minmax_value(a, h) < s.pos[n - 1].value - 1e-9 * norm) {
                    ok = false;
                    detail = "min-max lower bound violated, operator " + std::to_string(i);
                    break;
                }
            }
        }
    }
    double secs = elapsed_s(t0);
    if (ok && secs >= 120.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + " s over the 120 s budget";
    }
    report(2, "min-max functional dominates and attains mu_n^+", ok, detail);
}

// --- criteria 3 and 4: comparison inequalities and inclusions ---------------

void criteria_comparison_suites() {
    auto pairs = make_pairs(987654321, 1000);

    auto t0 = std::chrono::steady_clock::now();
    std::size_t failed = 0, checked = 0;
    for (const auto& [a1, a2] : pairs) {
        auto rep = full_pair_report(a1, a2);
        for (const Check& c : rep.checks) {
            if (c.verdict == Verdict::Skipped) continue;
            // inclusion and Hausdorff rows belong to criterion 4
            if (c.name.rfind("2.2.5", 0) == 0 || c.name.rfind("2.2.6", 0) == 0 ||
                c.name.rfind("2.2.1", 0) == 0)
                continue;
            ++checked;
            if (c.verdict == Verdict::Fail) ++failed;
        }
    }
    double secs = elapsed_s(t0);
    bool ok = failed == 0 && checked > 0 && secs < 120.0;
    report(3, "Weyl and two-sided comparison inequalities on 1000 pairs", ok,
           std::to_string(failed) + " failures in " + std::to_string(checked) + " checks, " +
               std::to_string(secs) + " s");

    auto t1 = std::chrono::steady_clock::now();
    std::size_t incl_failed = 0;
    for (const auto& [a1, a2] : pairs) {
        for (const Check& c : signed_inclusion_suite(a1, a2))
            if (c.verdict == Verdict::Fail) ++incl_failed;
        auto a = a1.plus(a2);
        double dist =
            hausdorff(oracle_full_set(a).with_zero(), oracle_full_set(a1).with_zero());
        double bound = 0.0;
        for (double v : oracle_full_set(a2).points) bound = std::max(bound, std::fabs(v));
        if (dist > bound + 1e-9) ++incl_failed;
    }
    double secs4 = elapsed_s(t1);
    bool ok4 = incl_failed == 0 && secs4 < 60.0;
    report(4, "signed spectrum inclusions and the Hausdorff bound", ok4,
           std::to_string(incl_failed) + " failures, " + std::to_string(secs4) + " s");
}

// --- criterion 5: Brownian tail certificate ---------------------------------

void criterion_tail_certificate() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (std::size_t d : {std::size_t{1}, std::size_t{3}}) {
        GaussianMeasure gamma(Matrix::identity(d), NormSpec(NormKind::L2));
        auto moment = empirical_q_moment(gamma, 4.0, 100000, 91, d);
        const double m4 = moment.conservative();
        for (int level = 4; level <= 12 && ok; ++level) {
            double delta = std::pow(2.0, -static_cast<double>(level) / 8.0);
            auto res = deviation_experiment(gamma, 1, level, delta, 4.0, m4, 10000, 91,
                                            100 * d + static_cast<std::uint64_t>(level));
            double closed_form = 16.0 * m4 * std::pow(2.0, -static_cast<double>(level) / 2.0);
            if (std::fabs(res.certificate - closed_form) > 1e-12 * closed_form) {
                ok = false;
                detail = "certificate does not match the closed form at N=" +
                         std::to_string(level);
            }
            if (res.empirical_freq > res.certificate + 3.0 * res.std_error) {
                ok = false;
                detail = "tail frequency exceeds certificate at d=" + std::to_string(d) +
                         " N=" + std::to_string(level);
            }
        }
    }
    double secs = elapsed_s(t0);
    if (ok && secs >= 600.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + " s over the 600 s budget";
    }
    report(5, "refinement tail certificate dominates empirical frequency", ok, detail);
}

// --- criterion 6: increment laws --------------------------------------------

void criterion_increment_laws() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    GaussianMeasure gamma(Matrix::identity(2), NormSpec(NormKind::L2));

    auto stats = increment_statistics(gamma, 1, 10, {{0.0, 0.5}, {0.5, 1.0}}, 10000, 92);
    for (std::size_t k = 0; k < 2 && ok; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                double expect = i == j ? 0.5 : 0.0;
                if (std::fabs(stats.covariances[k](i, j) - expect) >
                    5.0 * stats.cov_std_errors[k](i, j)) {
                    ok = false;
                    detail = "half-interval covariance outside 5 standard errors";
                }
            }
    for (std::size_t i = 0; i < 2 && ok; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (std::fabs(stats.cross_covariances[0](i, j)) >
                5.0 * stats.cross_std_errors[0](i, j)) {
                ok = false;
                detail = "cross-covariance outside 5 standard errors";
            }

    if (ok) {
        const double t = 0.375;  // dyadic at level 10
        auto at_t = increment_statistics(gamma, 1, 10, {{0.0, t}}, 10000, 93);
        for (std::size_t i = 0; i < 2 && ok; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                double expect = i == j ? t : 0.0;
                if (std::fabs(at_t.covariances[0](i, j) - expect) >
                    5.0 * at_t.cov_std_errors[0](i, j)) {
                    ok = false;
                    detail = "Cov(X(t)) outside 5 standard errors";
                }
            }
    }
    double secs = elapsed_s(t0);
    if (ok && secs >= 300.0) {
        ok = false;
        detail = "runtime " + std::to_string(secs) + " s over the 300 s budget";
    }
    report(6, "increment covariances match (t - s) Sigma with zero cross terms", ok, detail);
}

// --- criterion 7: support of degenerate measures ----------------------------

void criterion_support() {
    Matrix sigma(4, 4);
    // rank 2: sigma = v1 v1^T + v2 v2^T
    Vec v1{1.0, 2.0, 0.0, -1.0}, v2{0.0, 1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) sigma(i, j) = v1[i] * v1[j] + v2[i] * v2[j];
    GaussianMeasure gamma(sigma, NormSpec(NormKind::L2));
    auto res = support_check(gamma, 1, 6, 100, 94);
    bool ok = res.max_residual <= 1e-10 * res.max_grid_norm;
    report(7, "paths of a rank-2 measure stay in the support subspace", ok);
}

// --- criterion 8: CLI reproducibility ---------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_reproducibility() {
    const std::string cli = BMSPEC_CLI_PATH;
    fs::path dir = fs::temp_directory_path() / "bmspec_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run = [&](const std::string& args) {
        int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    std::ofstream(dir / "op1.json") << R"({"dim": 3, "entries": [2,0.3,0, 0.3,1,0, 0,0,-1]})";
    std::ofstream(dir / "op2.json") << R"({"dim": 3, "entries": [1,0,0, 0,0.5,0, 0,0,-0.5]})";

    bool ok = true;
    std::string detail;
    struct Cmd {
        std::string args;
        std::vector<std::string> outputs;
    };
    std::vector<Cmd> cmds = {
        {"bm-converge --seed 21 --dim 1 --n-min 3 --n-max 5 --trials 500 "
         "--moment-samples 2000 --out OUT",
         {"csv", "json"}},
        {"perturb-suite --seed 22 --dims 3 6 --pairs-per-cell 3 --out OUT", {"csv", "json"}},
        {"spectrum --operator " + (dir / "op1.json").string() + " --out OUT", {"json"}},
        {"weyl-check --a1 " + (dir / "op1.json").string() + " --a2 " +
             (dir / "op2.json").string() + " --p 1 --q 1 --out OUT",
         {"csv", "json"}},
        {"hausdorff --a " + (dir / "op1.json").string() + " --a1 " +
             (dir / "op2.json").string() + " --out OUT",
         {"csv", "json"}},
    };
    for (std::size_t i = 0; i < cmds.size() && ok; ++i) {
        std::string out_a = (dir / ("a" + std::to_string(i))).string();
        std::string out_b = (dir / ("b" + std::to_string(i))).string();
        auto args_a = cmds[i].args, args_b = cmds[i].args;
        args_a.replace(args_a.find("OUT"), 3, out_a);
        args_b.replace(args_b.find("OUT"), 3, out_b);
        int ra = run(args_a), rb = run(args_b);
        if (ra != rb) {
            ok = false;
            detail = "exit codes differ for: " + cmds[i].args;
            break;
        }
        for (const auto& ext : cmds[i].outputs)
            if (slurp(out_a + "." + ext) != slurp(out_b + "." + ext)) {
                ok = false;
                detail = "outputs differ for: " + cmds[i].args;
            }
    }
    fs::remove_all(dir);
    report(8, "identical seeds give byte-identical CLI outputs", ok, detail);
}

} // namespace

int main() {
    criterion_oracle_equivalence();
    criterion_theorem1();
    criteria_comparison_suites();
    criterion_tail_certificate();
    criterion_increment_laws();
    criterion_support();
    criterion_reproducibility();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
