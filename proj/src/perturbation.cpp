#include "bmspec/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bmspec {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Skipped: return "skipped";
    }
    return "?";
}

Check Check::pass_fail(std::string name, double lhs, double rhs, double tol) {
    Check c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.verdict = lhs <= rhs + tol ? Verdict::Pass : Verdict::Fail;
    return c;
}

Check Check::skipped(std::string name, std::string reason) {
    Check c;
    c.name = std::move(name);
    c.verdict = Verdict::Skipped;
    c.skipped_reason = std::move(reason);
    return c;
}

std::size_t PerturbationReport::passed() const {
    return std::count_if(checks.begin(), checks.end(),
                         [](const Check& c) { return c.verdict == Verdict::Pass; });
}

std::size_t PerturbationReport::failed() const {
    return std::count_if(checks.begin(), checks.end(),
                         [](const Check& c) { return c.verdict == Verdict::Fail; });
}

std::size_t PerturbationReport::skipped() const {
    return std::count_if(checks.begin(), checks.end(),
                         [](const Check& c) { return c.verdict == Verdict::Skipped; });
}

double PerturbationReport::worst_slack() const {
    double worst = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const Check& c : checks)
        if (c.verdict != Verdict::Skipped) {
            worst = std::min(worst, c.slack);
            any = true;
        }
    return any ? worst : 0.0;
}

void PerturbationReport::append(const PerturbationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

SpectrumSet SpectrumSet::with_zero() const {
    SpectrumSet out = *this;
    out.points.push_back(0.0);
    out.augmented = true;
    return out;
}

namespace {

double oracle_norm(const SymmetricOperator& b) {
    auto vals = oracle_spectrum(b).values;
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::fabs(v));
    return m;
}

struct SignedValues {
    std::vector<double> pos;  // descending
    std::vector<double> neg;  // ascending
    double norm = 0.0;
};

SignedValues signed_values(const SymmetricOperator& b) {
    SignedValues sv;
    auto vals = oracle_spectrum(b).values;  // descending
    for (double v : vals) sv.norm = std::max(sv.norm, std::fabs(v));
    const double tol0 = 1e-12 * (1.0 + sv.norm);
    for (double v : vals) {
        if (v > tol0) sv.pos.push_back(v);
        else if (v < -tol0) sv.neg.push_back(v);
    }
    std::sort(sv.neg.begin(), sv.neg.end());
    return sv;
}

} // namespace

SpectrumSet oracle_positive_set(const SymmetricOperator& b) {
    return {signed_values(b).pos, false};
}

SpectrumSet oracle_negative_set(const SymmetricOperator& b) {
    return {signed_values(b).neg, false};
}

SpectrumSet oracle_full_set(const SymmetricOperator& b) {
    return {oracle_spectrum(b).values, false};
}

double perturbation_tol(const SymmetricOperator& a1, const SymmetricOperator& a2) {
    return 1e-9 * std::max({oracle_norm(a1), oracle_norm(a2), 1.0});
}

namespace {

std::string eq_name(const char* eq, std::size_t p) {
    return std::string(eq) + " p=" + std::to_string(p);
}

std::string eq_name(const char* eq, std::size_t p, std::size_t q) {
    return eq_name(eq, p) + " q=" + std::to_string(q);
}

Check weyl_plus_from(const SignedValues& s1, const SignedValues& s2, const SignedValues& s,
                     std::size_t p, std::size_t q, double tol) {
    auto name = eq_name("2.1.10", p, q);
    if (p < 1 || q < 1) throw std::invalid_argument("weyl: p, q >= 1 required");
    if (p > s1.pos.size()) return Check::skipped(name, "mu_{p,A1}^+ does not exist");
    if (q > s2.pos.size()) return Check::skipped(name, "mu_{q,A2}^+ does not exist");
    if (p + q - 1 > s.pos.size()) return Check::skipped(name, "mu_{p+q-1,A}^+ does not exist");
    return Check::pass_fail(name, s.pos[p + q - 2], s1.pos[p - 1] + s2.pos[q - 1], tol);
}

Check weyl_minus_from(const SignedValues& s1, const SignedValues& s2, const SignedValues& s,
                      std::size_t p, std::size_t q, double tol) {
    auto name = eq_name("2.1.11", p, q);
    if (p < 1 || q < 1) throw std::invalid_argument("weyl: p, q >= 1 required");
    if (p > s1.neg.size()) return Check::skipped(name, "mu_{p,A1}^- does not exist");
    if (q > s2.neg.size()) return Check::skipped(name, "mu_{q,A2}^- does not exist");
    if (p + q - 1 > s.neg.size()) return Check::skipped(name, "mu_{p+q-1,A}^- does not exist");
    // lower bound: rewrite mu_A^- >= mu_A1^- + mu_A2^- as lhs <= rhs
    return Check::pass_fail(name, s1.neg[p - 1] + s2.neg[q - 1], s.neg[p + q - 2], tol);
}

} // namespace

Check weyl_plus(const SymmetricOperator& a1, const SymmetricOperator& a2, std::size_t p,
                std::size_t q) {
    auto a = a1.plus(a2);
    return weyl_plus_from(signed_values(a1), signed_values(a2), signed_values(a), p, q,
                          perturbation_tol(a1, a2));
}

Check weyl_minus(const SymmetricOperator& a1, const SymmetricOperator& a2, std::size_t p,
                 std::size_t q) {
    auto a = a1.plus(a2);
    return weyl_minus_from(signed_values(a1), signed_values(a2), signed_values(a), p, q,
                           perturbation_tol(a1, a2));
}

namespace {

std::vector<Check> norm_shift_from(const SignedValues& s1, const SignedValues& s2,
                                   const SignedValues& s, std::size_t p, double tol) {
    std::vector<Check> out;
    auto name_plus = eq_name("2.1.12", p);
    if (p > s1.pos.size())
        out.push_back(Check::skipped(name_plus, "mu_{p,A1}^+ does not exist"));
    else if (p > s.pos.size())
        out.push_back(Check::skipped(name_plus, "mu_{p,A}^+ does not exist"));
    else
        out.push_back(Check::pass_fail(name_plus, s.pos[p - 1], s1.pos[p - 1] + s2.norm, tol));

    auto name_minus = eq_name("2.1.13", p);
    if (p > s1.neg.size())
        out.push_back(Check::skipped(name_minus, "mu_{p,A1}^- does not exist"));
    else if (p > s.neg.size())
        out.push_back(Check::skipped(name_minus, "mu_{p,A}^- does not exist"));
    else
        out.push_back(Check::pass_fail(name_minus, s1.neg[p - 1] - s2.norm, s.neg[p - 1], tol));
    return out;
}

std::vector<Check> two_sided_from(const SignedValues& s1, const SignedValues& s2,
                                  const SignedValues& s, std::size_t p, double tol) {
    std::vector<Check> out;

    auto name_plus = eq_name("2.2.4", p);
    if (p > s1.pos.size() || p > s.pos.size()) {
        out.push_back(Check::skipped(name_plus, "p-th positive eigenvalue missing"));
    } else {
        double diff = s.pos[p - 1] - s1.pos[p - 1];
        out.push_back(Check::pass_fail(name_plus, std::fabs(diff), s2.norm, tol));
        // sharper sandwich (2.1.17): -mu_{1,-A2}^+ <= diff <= mu_{1,A2}^+;
        // mu_{1,-A2}^+ = -mu_{1,A2}^- when the latter exists
        auto name_lo = eq_name("2.1.17-lower", p);
        if (!s2.neg.empty())
            out.push_back(Check::pass_fail(name_lo, s2.neg.front(), diff, tol));
        else
            out.push_back(Check::skipped(name_lo, "mu_{1,-A2}^+ does not exist"));
        auto name_hi = eq_name("2.1.17-upper", p);
        if (!s2.pos.empty())
            out.push_back(Check::pass_fail(name_hi, diff, s2.pos.front(), tol));
        else
            out.push_back(Check::skipped(name_hi, "mu_{1,A2}^+ does not exist"));
    }

    auto name_minus = eq_name("2.1.21", p);
    if (p > s1.neg.size() || p > s.neg.size())
        out.push_back(Check::skipped(name_minus, "p-th negative eigenvalue missing"));
    else
        out.push_back(Check::pass_fail(name_minus, std::fabs(s.neg[p - 1] - s1.neg[p - 1]),
                                       s2.norm, tol));
    return out;
}

} // namespace

std::vector<Check> norm_shift_bounds(const SymmetricOperator& a1,
                                     const SymmetricOperator& a2, std::size_t p) {
    if (p < 1) throw std::invalid_argument("norm_shift_bounds: p >= 1 required");
    auto a = a1.plus(a2);
    return norm_shift_from(signed_values(a1), signed_values(a2), signed_values(a), p,
                           perturbation_tol(a1, a2));
}

std::vector<Check> two_sided_bounds(const SymmetricOperator& a1,
                                    const SymmetricOperator& a2, std::size_t p) {
    if (p < 1) throw std::invalid_argument("two_sided_bounds: p >= 1 required");
    auto a = a1.plus(a2);
    return two_sided_from(signed_values(a1), signed_values(a2), signed_values(a), p,
                          perturbation_tol(a1, a2));
}

namespace {

double dist_to_set(double x, const std::vector<double>& t) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : t) best = std::min(best, std::fabs(x - v));
    return best;
}

double directed_sup(const std::vector<double>& s, const std::vector<double>& t) {
    double sup = 0.0;
    for (double x : s) sup = std::max(sup, dist_to_set(x, t));
    return sup;
}

} // namespace

bool spectrum_inclusion(const SpectrumSet& s, const SpectrumSet& t, double delta) {
    if (delta <= 0.0) throw std::domain_error("spectrum_inclusion: delta > 0 required");
    for (double x : s.points)
        if (!(dist_to_set(x, t.points) < delta)) return false;
    return true;
}

namespace {

std::vector<Check> inclusion_suite_from(const SignedValues& s1, const SignedValues& s,
                                        double a2_norm, double tol) {
    const double delta = a2_norm + tol;
    auto one = [&](const char* name, const std::vector<double>& from,
                   std::vector<double> to) {
        to.push_back(0.0);  // the lemmas' "union {0}" target
        double lhs = directed_sup(from, to);
        return Check::pass_fail(name, lhs, delta, 0.0);  // strictness via delta itself
    };
    return {
        one("2.2.5", s.pos, s1.pos),
        one("2.2.6", s1.pos, s.pos),
        one("2.2.13", s.neg, s1.neg),
        one("2.2.14", s1.neg, s.neg),
    };
}

} // namespace

std::vector<Check> signed_inclusion_suite(const SymmetricOperator& a1,
                                          const SymmetricOperator& a2) {
    auto a = a1.plus(a2);
    return inclusion_suite_from(signed_values(a1), signed_values(a), oracle_norm(a2),
                                perturbation_tol(a1, a2));
}

double hausdorff(const SpectrumSet& s, const SpectrumSet& t) {
    if (s.points.empty() || t.points.empty())
        throw std::domain_error("hausdorff: sets must be nonempty");
    return std::max(directed_sup(s.points, t.points), directed_sup(t.points, s.points));
}

PairProfile profile_from_string(const std::string& s) {
    if (s == "generic") return PairProfile::Generic;
    if (s == "sign-definite") return PairProfile::SignDefinite;
    if (s == "rank-deficient") return PairProfile::RankDeficient;
    if (s == "near-degenerate") return PairProfile::NearDegenerate;
    if (s == "tiny-perturbation") return PairProfile::TinyPerturbation;
    throw std::invalid_argument("unknown profile: " + s);
}

std::string to_string(PairProfile p) {
    switch (p) {
        case PairProfile::Generic: return "generic";
        case PairProfile::SignDefinite: return "sign-definite";
        case PairProfile::RankDeficient: return "rank-deficient";
        case PairProfile::NearDegenerate: return "near-degenerate";
        case PairProfile::TinyPerturbation: return "tiny-perturbation";
    }
    return "?";
}

const std::vector<PairProfile>& all_profiles() {
    static const std::vector<PairProfile> profiles{
        PairProfile::Generic, PairProfile::SignDefinite, PairProfile::RankDeficient,
        PairProfile::NearDegenerate, PairProfile::TinyPerturbation};
    return profiles;
}

namespace {

Matrix random_orthogonal(CounterRng& rng, std::size_t d) {
    while (true) {
        std::vector<Vec> cols(d, Vec(d));
        for (auto& c : cols)
            for (double& v : c) v = rng.next_gaussian();
        auto basis = orthonormalize(std::move(cols));
        if (basis.size() != d) continue;  // astronomically unlikely
        Matrix q(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) q(i, j) = basis[j][i];
        return q;
    }
}

SymmetricOperator from_eigenvalues(CounterRng& rng, const std::vector<double>& eigs) {
    const std::size_t d = eigs.size();
    Matrix q = random_orthogonal(rng, d);
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += q(i, k) * eigs[k] * q(j, k);
            m(i, j) = s;
        }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    return SymmetricOperator(std::move(m));
}

std::vector<double> generic_eigs(CounterRng& rng, std::size_t d) {
    std::vector<double> e(d);
    for (double& v : e) v = 2.0 * rng.next_double() - 1.0;
    return e;
}

} // namespace

std::pair<SymmetricOperator, SymmetricOperator> random_operator_pair(
    std::uint64_t seed, std::uint64_t stream, std::size_t dim, PairProfile profile) {
    if (dim < 2) throw std::invalid_argument("random_operator_pair: dim >= 2 required");
    CounterRng rng(seed, stream);

    std::vector<double> e1, e2;
    switch (profile) {
        case PairProfile::Generic:
            e1 = generic_eigs(rng, dim);
            e2 = generic_eigs(rng, dim);
            for (double& v : e2) v *= 0.5;
            break;
        case PairProfile::SignDefinite:
            e1.resize(dim);
            for (double& v : e1) v = 0.1 + 1.9 * rng.next_double();
            e2 = generic_eigs(rng, dim);
            break;
        case PairProfile::RankDeficient: {
            e1 = generic_eigs(rng, dim);
            e2 = generic_eigs(rng, dim);
            std::size_t zeros = 1 + dim / 3;
            for (std::size_t k = 0; k < zeros; ++k) {
                e1[k] = 0.0;
                e2[dim - 1 - k] = 0.0;
            }
            break;
        }
        case PairProfile::NearDegenerate: {
            e1.resize(dim);
            double base = 2.0 * rng.next_double() - 1.0;
            for (std::size_t k = 0; k < dim; ++k) {
                if (k % 3 == 0) base = 2.0 * rng.next_double() - 1.0;
                e1[k] = base + 1e-6 * (rng.next_double() - 0.5);
            }
            e2 = generic_eigs(rng, dim);
            for (double& v : e2) v *= 0.5;
            break;
        }
        case PairProfile::TinyPerturbation:
            e1 = generic_eigs(rng, dim);
            e2 = generic_eigs(rng, dim);
            break;
    }

    auto a1 = from_eigenvalues(rng, e1);
    auto a2 = from_eigenvalues(rng, e2);
    if (profile == PairProfile::TinyPerturbation) {
        double n1 = oracle_norm(a1), n2 = oracle_norm(a2);
        double target = 1e-3 * n1 * (0.1 + 0.9 * rng.next_double());
        double f = n2 > 0.0 ? target / n2 : 0.0;
        Matrix m = a2.entries();
        for (double& v : m.data()) v *= f;
        a2 = SymmetricOperator(std::move(m));
    }
    return {std::move(a1), std::move(a2)};
}

PerturbationReport full_pair_report(const SymmetricOperator& a1,
                                    const SymmetricOperator& a2) {
    auto a = a1.plus(a2);
    const auto s1 = signed_values(a1);
    const auto s2 = signed_values(a2);
    const auto s = signed_values(a);
    const double tol = 1e-9 * std::max({s1.norm, s2.norm, 1.0});

    PerturbationReport report;
    if (s1.pos.empty() || s2.pos.empty())
        report.checks.push_back(weyl_plus_from(s1, s2, s, 1, 1, tol));
    for (std::size_t p = 1; p <= s1.pos.size(); ++p)
        for (std::size_t q = 1; q <= s2.pos.size(); ++q)
            report.checks.push_back(weyl_plus_from(s1, s2, s, p, q, tol));
    if (s1.neg.empty() || s2.neg.empty())
        report.checks.push_back(weyl_minus_from(s1, s2, s, 1, 1, tol));
    for (std::size_t p = 1; p <= s1.neg.size(); ++p)
        for (std::size_t q = 1; q <= s2.neg.size(); ++q)
            report.checks.push_back(weyl_minus_from(s1, s2, s, p, q, tol));

    const std::size_t max_p =
        std::max({s1.pos.size(), s1.neg.size(), std::size_t{1}});
    for (std::size_t p = 1; p <= max_p; ++p) {
        auto ns = norm_shift_from(s1, s2, s, p, tol);
        report.checks.insert(report.checks.end(), ns.begin(), ns.end());
        auto ts = two_sided_from(s1, s2, s, p, tol);
        report.checks.insert(report.checks.end(), ts.begin(), ts.end());
    }

    auto incl = inclusion_suite_from(s1, s, s2.norm, tol);
    report.checks.insert(report.checks.end(), incl.begin(), incl.end());

    // Hausdorff bound with {0} adjoined to both full spectra
    SpectrumSet full_a{std::vector<double>{}, false}, full_a1{std::vector<double>{}, false};
    full_a.points = s.pos;
    full_a.points.insert(full_a.points.end(), s.neg.begin(), s.neg.end());
    full_a1.points = s1.pos;
    full_a1.points.insert(full_a1.points.end(), s1.neg.begin(), s1.neg.end());
    report.checks.push_back(Check::pass_fail(
        "2.2.15", hausdorff(full_a.with_zero(), full_a1.with_zero()), s2.norm, tol));
    return report;
}

namespace {

template <bool Parallel>
SuiteResult run_suite_impl(const SuiteConfig& config) {
    struct Cell {
        std::size_t dim;
        PairProfile profile;
        std::size_t pair_index;
        std::uint64_t stream;
    };
    std::vector<Cell> cells;
    std::uint64_t stream = 0;
    for (std::size_t dim : config.dims)
        for (PairProfile profile : config.profiles)
            for (std::size_t k = 0; k < config.pairs_per_cell; ++k)
                cells.push_back({dim, profile, k, stream++});

    std::vector<PerturbationReport> reports(cells.size());
    const auto n = static_cast<long long>(cells.size());
#pragma omp parallel for schedule(dynamic) if (Parallel)
    for (long long i = 0; i < n; ++i) {
        const Cell& cell = cells[static_cast<std::size_t>(i)];
        auto [a1, a2] =
            random_operator_pair(config.seed, cell.stream, cell.dim, cell.profile);
        reports[static_cast<std::size_t>(i)] = full_pair_report(a1, a2);
    }

    SuiteResult result;
    result.worst_slack = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (const Check& c : reports[i].checks) {
            result.rows.push_back({cells[i].dim, cells[i].profile, cells[i].pair_index, c});
            ++result.total;
            switch (c.verdict) {
                case Verdict::Pass: ++result.passed; break;
                case Verdict::Fail: ++result.failed; break;
                case Verdict::Skipped: ++result.skipped; break;
            }
            if (c.verdict != Verdict::Skipped) {
                result.worst_slack = std::min(result.worst_slack, c.slack);
                any = true;
            }
        }
    if (!any) result.worst_slack = 0.0;
    return result;
}

} // namespace

SuiteResult run_suite(const SuiteConfig& config) { return run_suite_impl<true>(config); }

SuiteResult run_suite_serial(const SuiteConfig& config) {
    return run_suite_impl<false>(config);
}

} // namespace bmspec
