// Command-line driver: Brownian refinement experiments, spectral
// perturbation suites, and single-operator spectra, all seeded and
// byte-reproducible.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmspec/brownian.hpp"
#include "bmspec/gaussian.hpp"
#include "bmspec/perturbation.hpp"
#include "bmspec/report_io.hpp"
#include "bmspec/spectral.hpp"

using nlohmann::json;
using namespace bmspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifiedFailure = 1;
constexpr int kExitUsage = 2;

// stream-id namespaces so subcommands never reuse a trial stream family
constexpr std::uint64_t kStreamMoment = 0x10;
constexpr std::uint64_t kStreamDeviationBase = 0x1000;
constexpr std::uint64_t kStreamSupportBase = 0x2000;

struct ConfigOverlay {
    json data = json::object();

    static ConfigOverlay load(const std::string& path, const std::set<std::string>& allowed) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config " + path);
        ConfigOverlay overlay;
        in >> overlay.data;
        if (!overlay.data.is_object()) throw std::runtime_error("config must be a JSON object");
        for (auto& [key, _] : overlay.data.items())
            if (!allowed.contains(key))
                throw std::runtime_error("unknown config field: " + key);
        return overlay;
    }

    template <typename T>
    void apply(const CLI::Option* opt, const std::string& key, T& value) const {
        if (opt->count() == 0 && data.contains(key)) value = data.at(key).get<T>();
    }
};

double delta_for(const std::string& rule, int level) {
    if (rule == "dyadic-eighth") return std::pow(2.0, -static_cast<double>(level) / 8.0);
    if (rule.rfind("fixed=", 0) == 0) return std::stod(rule.substr(6));
    throw std::runtime_error("unknown delta rule: " + rule);
}

int run_bm_converge(std::uint64_t seed, std::size_t dim, const std::string& preset,
                    const std::string& covariance_file, const std::string& norm_kind,
                    int horizon, int n_min, int n_max, double r,
                    const std::string& delta_rule, std::size_t trials,
                    std::size_t moment_samples, bool support_check_enabled,
                    const std::string& out) {
    std::optional<GaussianMeasure> gamma;
    if (!covariance_file.empty()) {
        gamma = load_measure(covariance_file);
    } else if (preset == "identity") {
        gamma = GaussianMeasure(Matrix::identity(dim),
                                NormSpec(norm_kind_from_string(norm_kind)));
    } else {
        throw std::runtime_error("unknown covariance preset: " + preset);
    }
    if (n_min < 1 || n_max < n_min) throw std::runtime_error("need 1 <= N_min <= N_max");

    MomentEstimate moment = empirical_q_moment(*gamma, r, moment_samples, seed, kStreamMoment);
    const double m_r = moment.conservative();

    std::vector<std::string> header{"N", "delta", "certificate", "empirical_freq",
                                    "stderr", "verdict"};
    if (support_check_enabled) header.push_back("support_residual");
    CsvWriter csv(header);

    bool all_pass = true;
    for (int level = n_min; level <= n_max; ++level) {
        double delta = delta_for(delta_rule, level);
        DeviationResult res =
            deviation_experiment(*gamma, horizon, level, delta, r, m_r, trials, seed,
                                 kStreamDeviationBase + static_cast<std::uint64_t>(level));
        all_pass = all_pass && res.verdict;
        std::vector<std::string> row{
            std::to_string(level),          format_double(delta),
            format_double(res.certificate), format_double(res.empirical_freq),
            format_double(res.std_error),   res.verdict ? "pass" : "fail"};
        if (support_check_enabled) {
            auto sc = support_check(*gamma, horizon, level, 100, seed,
                                    kStreamSupportBase + static_cast<std::uint64_t>(level));
            row.push_back(format_double(sc.max_residual / std::max(sc.max_grid_norm, 1e-300)));
        }
        csv.add_row(std::move(row));
    }
    csv.write(out + ".csv");

    json summary;
    summary["command"] = "bm-converge";
    summary["seed"] = seed;
    summary["dim"] = gamma->dim();
    summary["horizon"] = horizon;
    summary["r"] = r;
    summary["trials"] = trials;
    summary["moment_estimate"] = moment.value;
    summary["moment_std_error"] = moment.std_error;
    summary["moment_conservative"] = m_r;
    summary["all_pass"] = all_pass;
    write_text_file(out + ".json", summary.dump(2) + "\n");
    return all_pass ? kExitOk : kExitVerifiedFailure;
}

int run_perturb_suite(std::uint64_t seed, const std::vector<std::size_t>& dims,
                      const std::vector<std::string>& profile_names,
                      std::size_t pairs_per_cell, bool inject_violation,
                      const std::string& out) {
    SuiteConfig config;
    config.seed = seed;
    config.dims = dims;
    if (!profile_names.empty()) {
        config.profiles.clear();
        for (const auto& name : profile_names)
            config.profiles.push_back(profile_from_string(name));
    }
    config.pairs_per_cell = pairs_per_cell;

    SuiteResult result = run_suite(config);
    if (inject_violation) {
        // deliberate failing row to exercise the exit-code path
        SuiteRow row;
        row.dim = 0;
        row.check = Check::pass_fail("injected-violation", 1.0, 0.0, 0.0);
        result.rows.push_back(row);
        ++result.total;
        ++result.failed;
        result.worst_slack = std::min(result.worst_slack, row.check.slack);
    }

    CsvWriter csv({"dim", "profile", "pair", "check", "lhs", "rhs", "slack", "verdict",
                   "skipped_reason"});
    for (const SuiteRow& row : result.rows)
        csv.add_row({std::to_string(row.dim), to_string(row.profile),
                     std::to_string(row.pair_index), row.check.name,
                     format_double(row.check.lhs), format_double(row.check.rhs),
                     format_double(row.check.slack), to_string(row.check.verdict),
                     row.check.skipped_reason});
    csv.write(out + ".csv");

    json summary;
    summary["command"] = "perturb-suite";
    summary["seed"] = seed;
    summary["total"] = result.total;
    summary["passed"] = result.passed;
    summary["skipped"] = result.skipped;
    summary["failed"] = result.failed;
    summary["worst_slack"] = result.worst_slack;
    write_text_file(out + ".json", summary.dump(2) + "\n");
    return result.failed == 0 ? kExitOk : kExitVerifiedFailure;
}

int run_spectrum(const std::string& operator_file, const std::string& out) {
    SymmetricOperator op = load_operator(operator_file);
    SignedSpectrum s = signed_spectrum(op);
    OracleSpectrum oracle = oracle_spectrum(op);

    auto mine = s.all_values(op.dim());
    double diff = 0.0;
    for (std::size_t i = 0; i < mine.size(); ++i)
        diff = std::max(diff, std::fabs(mine[i] - oracle.values[i]));
    double norm = 0.0;
    for (double v : oracle.values) norm = std::max(norm, std::fabs(v));

    json j = json::parse(spectrum_to_json(s));
    j["oracle_diff"] = diff;
    std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out + ".json", text);
    return diff <= 1e-8 * std::max(norm, 1e-300) ? kExitOk : kExitVerifiedFailure;
}

int run_weyl_check(const std::string& a1_file, const std::string& a2_file, std::size_t p,
                   std::size_t q, const std::string& out) {
    SymmetricOperator a1 = load_operator(a1_file);
    SymmetricOperator a2 = load_operator(a2_file);
    std::vector<Check> checks{weyl_plus(a1, a2, p, q), weyl_minus(a1, a2, p, q)};

    CsvWriter csv({"check", "lhs", "rhs", "slack", "verdict", "skipped_reason"});
    std::size_t failed = 0;
    for (const Check& c : checks) {
        if (c.verdict == Verdict::Fail) ++failed;
        csv.add_row({c.name, format_double(c.lhs), format_double(c.rhs),
                     format_double(c.slack), to_string(c.verdict), c.skipped_reason});
    }
    json summary;
    summary["command"] = "weyl-check";
    summary["p"] = p;
    summary["q"] = q;
    summary["failed"] = failed;
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        csv.write(out + ".csv");
        write_text_file(out + ".json", summary.dump(2) + "\n");
    }
    return failed == 0 ? kExitOk : kExitVerifiedFailure;
}

int run_hausdorff(const std::string& a_file, const std::string& a1_file,
                  const std::string& out) {
    // first operator is A, second is A1; A2 = A - A1 supplies the bound
    SymmetricOperator a = load_operator(a_file);
    SymmetricOperator a1 = load_operator(a1_file);
    SymmetricOperator a2 = a.plus(a1.negated());

    SpectrumSet sa = oracle_full_set(a).with_zero();
    SpectrumSet sa1 = oracle_full_set(a1).with_zero();
    double dist = hausdorff(sa, sa1);
    double bound = 0.0;
    for (double v : oracle_spectrum(a2).values) bound = std::max(bound, std::fabs(v));
    double tol = perturbation_tol(a1, a2);
    bool pass = dist <= bound + tol;

    CsvWriter csv({"check", "lhs", "rhs", "slack", "verdict", "skipped_reason"});
    csv.add_row({"2.2.15", format_double(dist), format_double(bound),
                 format_double(bound - dist), pass ? "pass" : "fail", ""});
    json summary;
    summary["command"] = "hausdorff";
    summary["distance"] = dist;
    summary["perturbation_norm"] = bound;
    summary["pass"] = pass;
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        csv.write(out + ".csv");
        write_text_file(out + ".json", summary.dump(2) + "\n");
    }
    return pass ? kExitOk : kExitVerifiedFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-measure Brownian refinement and spectral perturbation checks"};
    app.require_subcommand(1);

    // shared state; each subcommand registers the options it needs
    std::uint64_t seed = 0;
    std::string config_path, out;

    auto add_common = [&](CLI::App* cmd) {
        auto* seed_opt = cmd->add_option("--seed", seed, "random seed (required)");
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out, "output path prefix");
        return seed_opt;
    };

    // bm-converge
    auto* bm = app.add_subcommand("bm-converge",
                                  "dyadic refinement tail-certificate experiment");
    std::size_t dim = 1;
    std::string preset = "identity", covariance_file, norm_kind = "l2";
    int horizon = 1, n_min = 4, n_max = 12;
    double r_moment = 4.0;
    std::string delta_rule = "dyadic-eighth";
    std::size_t trials = 10000, moment_samples = 100000;
    bool support_enabled = false;
    auto* bm_seed = add_common(bm);
    auto* o_dim = bm->add_option("--dim", dim, "dimension (identity preset)");
    auto* o_preset = bm->add_option("--preset", preset, "covariance preset: identity");
    auto* o_cov = bm->add_option("--covariance", covariance_file, "measure JSON file");
    auto* o_norm = bm->add_option("--norm", norm_kind, "norm kind: l1|l2|linf");
    auto* o_b = bm->add_option("--b", horizon, "time horizon (integer >= 1)");
    auto* o_nmin = bm->add_option("--n-min", n_min, "smallest level N");
    auto* o_nmax = bm->add_option("--n-max", n_max, "largest level N");
    auto* o_r = bm->add_option("--r", r_moment, "moment order r");
    auto* o_rule = bm->add_option("--delta-rule", delta_rule,
                                  "dyadic-eighth (2^{-N/8}) or fixed=<value>");
    auto* o_trials = bm->add_option("--trials", trials, "paths per level");
    auto* o_msamp = bm->add_option("--moment-samples", moment_samples,
                                   "samples for the moment estimate");
    auto* o_sup = bm->add_flag("--support-check", support_enabled,
                               "add support residual column (rank-deficient covariance)");

    // perturb-suite
    auto* ps = app.add_subcommand("perturb-suite", "comparison-inequality batch suite");
    std::vector<std::size_t> suite_dims{2, 5, 10, 25, 50};
    std::vector<std::string> suite_profiles;
    std::size_t pairs_per_cell = 40;
    bool inject_violation = false;
    auto* ps_seed = add_common(ps);
    auto* o_dims = ps->add_option("--dims", suite_dims, "operator dimensions");
    auto* o_profiles = ps->add_option("--profiles", suite_profiles,
                                      "pair profiles (default: all five)");
    auto* o_pairs = ps->add_option("--pairs-per-cell", pairs_per_cell,
                                   "pairs per (dim, profile) cell");
    ps->add_flag("--inject-violation", inject_violation,
                 "append a synthetic failing row (failure-path testing)");

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "signed spectrum of one operator");
    std::string operator_file;
    auto* sp_seed = add_common(sp);
    sp->add_option("--operator", operator_file, "operator JSON or CSV file")->required();

    // weyl-check
    auto* wc = app.add_subcommand("weyl-check", "Weyl inequalities for one (A1, A2, p, q)");
    std::string a1_file, a2_file;
    std::size_t p = 1, q = 1;
    auto* wc_seed = add_common(wc);
    wc->add_option("--a1", a1_file, "first operator file")->required();
    wc->add_option("--a2", a2_file, "second operator file")->required();
    wc->add_option("--p", p, "index p");
    wc->add_option("--q", q, "index q");

    // hausdorff
    auto* hd = app.add_subcommand("hausdorff",
                                  "Hausdorff distance of spectra, A vs A1, bound ||A - A1||");
    std::string ha_file, ha1_file;
    auto* hd_seed = add_common(hd);
    hd->add_option("--a", ha_file, "operator A file")->required();
    hd->add_option("--a1", ha1_file, "operator A1 file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (bm->parsed()) {
            bool seed_given = bm_seed->count() > 0;
            if (!config_path.empty()) {
                auto overlay = ConfigOverlay::load(
                    config_path, {"seed", "out", "dim", "preset", "covariance", "norm", "b",
                                  "N_min", "N_max", "r", "delta_rule", "trials",
                                  "moment_samples", "support_check"});
                overlay.apply(bm_seed, "seed", seed);
                overlay.apply(o_dim, "dim", dim);
                overlay.apply(o_preset, "preset", preset);
                overlay.apply(o_cov, "covariance", covariance_file);
                overlay.apply(o_norm, "norm", norm_kind);
                overlay.apply(o_b, "b", horizon);
                overlay.apply(o_nmin, "N_min", n_min);
                overlay.apply(o_nmax, "N_max", n_max);
                overlay.apply(o_r, "r", r_moment);
                overlay.apply(o_rule, "delta_rule", delta_rule);
                overlay.apply(o_trials, "trials", trials);
                overlay.apply(o_msamp, "moment_samples", moment_samples);
                overlay.apply(o_sup, "support_check", support_enabled);
                seed_given = seed_given || overlay.data.contains("seed");
                if (out.empty() && overlay.data.contains("out"))
                    out = overlay.data.at("out").get<std::string>();
            }
            if (!seed_given) throw std::runtime_error("--seed is required");
            if (out.empty()) throw std::runtime_error("--out is required");
            return run_bm_converge(seed, dim, preset, covariance_file, norm_kind, horizon,
                                   n_min, n_max, r_moment, delta_rule, trials,
                                   moment_samples, support_enabled, out);
        }
        if (ps->parsed()) {
            bool seed_given = ps_seed->count() > 0;
            if (!config_path.empty()) {
                auto overlay = ConfigOverlay::load(
                    config_path, {"seed", "out", "dims", "profiles", "pairs_per_cell", "tol"});
                overlay.apply(ps_seed, "seed", seed);
                overlay.apply(o_dims, "dims", suite_dims);
                overlay.apply(o_profiles, "profiles", suite_profiles);
                overlay.apply(o_pairs, "pairs_per_cell", pairs_per_cell);
                seed_given = seed_given || overlay.data.contains("seed");
                if (out.empty() && overlay.data.contains("out"))
                    out = overlay.data.at("out").get<std::string>();
            }
            if (!seed_given) throw std::runtime_error("--seed is required");
            if (out.empty()) throw std::runtime_error("--out is required");
            return run_perturb_suite(seed, suite_dims, suite_profiles, pairs_per_cell,
                                     inject_violation, out);
        }
        if (sp->parsed()) {
            (void)sp_seed;
            return run_spectrum(operator_file, out);
        }
        if (wc->parsed()) {
            (void)wc_seed;
            return run_weyl_check(a1_file, a2_file, p, q, out);
        }
        if (hd->parsed()) {
            (void)hd_seed;
            return run_hausdorff(ha_file, ha1_file, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
