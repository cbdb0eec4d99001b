#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmspec/rng.hpp"
#include "bmspec/spectral.hpp"

namespace bmspec {

enum class Verdict { Pass, Fail, Skipped };

std::string to_string(Verdict v);

struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    Verdict verdict = Verdict::Skipped;
    std::string skipped_reason;

    static Check pass_fail(std::string name, double lhs, double rhs, double tol);
    static Check skipped(std::string name, std::string reason);
};

struct PerturbationReport {
    std::vector<Check> checks;

    std::size_t passed() const;
    std::size_t failed() const;
    std::size_t skipped() const;
    // min slack over non-skipped checks; how close any inequality came
    double worst_slack() const;
    void append(const PerturbationReport& other);
};

// Finite multiset of spectrum points; augmented marks that 0 was adjoined.
struct SpectrumSet {
    std::vector<double> points;
    bool augmented = false;

    SpectrumSet with_zero() const;
};

// Signed spectra as plain point sets, from the Jacobi oracle. Strict
// positivity/negativity is decided at 1e-12 * (1 + ||B||).
SpectrumSet oracle_positive_set(const SymmetricOperator& b);
SpectrumSet oracle_negative_set(const SymmetricOperator& b);
SpectrumSet oracle_full_set(const SymmetricOperator& b);

double perturbation_tol(const SymmetricOperator& a1, const SymmetricOperator& a2);

// mu_{p+q-1,A}^+ <= mu_{p,A1}^+ + mu_{q,A2}^+ for A = A1 + A2.
Check weyl_plus(const SymmetricOperator& a1, const SymmetricOperator& a2, std::size_t p,
                std::size_t q);

// mu_{p+q-1,A}^- >= mu_{p,A1}^- + mu_{q,A2}^-, written out directly rather
// than via the sign-flip reduction (tests cross-check the two).
Check weyl_minus(const SymmetricOperator& a1, const SymmetricOperator& a2, std::size_t p,
                 std::size_t q);

// mu_{p,A}^+ <= mu_{p,A1}^+ + ||A2|| and mu_{p,A}^- >= mu_{p,A1}^- - ||A2||.
std::vector<Check> norm_shift_bounds(const SymmetricOperator& a1,
                                     const SymmetricOperator& a2, std::size_t p);

// |mu_{p,A}^± - mu_{p,A1}^±| <= ||A2||, plus the sharper sandwich
// -mu_{1,-A2}^+ <= mu_{p,A}^+ - mu_{p,A1}^+ <= mu_{1,A2}^+.
std::vector<Check> two_sided_bounds(const SymmetricOperator& a1,
                                    const SymmetricOperator& a2, std::size_t p);

// every point of s within strict distance delta of some point of t
bool spectrum_inclusion(const SpectrumSet& s, const SpectrumSet& t, double delta);

// the four one-sided inclusions between signed spectra of A and A1 with
// {0}-augmented targets and delta = ||A2|| + tol
std::vector<Check> signed_inclusion_suite(const SymmetricOperator& a1,
                                          const SymmetricOperator& a2);

double hausdorff(const SpectrumSet& s, const SpectrumSet& t);

enum class PairProfile { Generic, SignDefinite, RankDeficient, NearDegenerate, TinyPerturbation };

PairProfile profile_from_string(const std::string& s);
std::string to_string(PairProfile p);
const std::vector<PairProfile>& all_profiles();

std::pair<SymmetricOperator, SymmetricOperator> random_operator_pair(
    std::uint64_t seed, std::uint64_t stream, std::size_t dim, PairProfile profile);

// Every applicable inequality of the comparison theorems and lemmas for one
// pair, over all valid (p, q).
PerturbationReport full_pair_report(const SymmetricOperator& a1,
                                    const SymmetricOperator& a2);

struct SuiteConfig {
    std::vector<std::size_t> dims{2, 5, 10, 25, 50};
    std::vector<PairProfile> profiles = all_profiles();
    std::size_t pairs_per_cell = 40;
    std::uint64_t seed = 0;
};

struct SuiteRow {
    std::size_t dim = 0;
    PairProfile profile = PairProfile::Generic;
    std::size_t pair_index = 0;
    Check check;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;
    std::size_t total = 0, passed = 0, skipped = 0, failed = 0;
    double worst_slack = 0.0;
};

SuiteResult run_suite(const SuiteConfig& config);
SuiteResult run_suite_serial(const SuiteConfig& config);

} // namespace bmspec
