#include "rootflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rootflow/errors.hpp"
#include "rootflow/json_io.hpp"
#include "rootflow/radial.hpp"

namespace rootflow {

namespace {

using Clock = std::chrono::steady_clock;

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

const char* law_name(CoefficientTag t) {
    switch (t) {
        case CoefficientTag::ComplexGaussian:
            return "complex_gaussian";
        case CoefficientTag::RealGaussian:
            return "real_gaussian";
        case CoefficientTag::Rademacher:
            return "rademacher";
    }
    return "?";
}

double mean_of(const std::vector<TrialRecord>& trials, double TrialRecord::*field) {
    if (trials.empty()) return 0.0;
    double s = 0.0;
    for (const auto& tr : trials) s += tr.*field;
    return s / static_cast<double>(trials.size());
}

void add_check(Report& r, const std::string& name, double value, double threshold, bool pass,
               const std::string& detail = "") {
    if (!r.cfg.check_enabled(name)) return;
    r.checks.push_back({name, value, threshold, pass, detail});
}

// Only runs when named in cfg.checks.
void add_opt_in_check(Report& r, const std::string& name, double value, double threshold, bool pass,
                      const std::string& detail = "") {
    if (r.cfg.checks.empty()) return;
    add_check(r, name, value, threshold, pass, detail);
}

// Runs cfg.trials independent polynomials; `stats` fills the per-trial numbers
// from the root cloud.
template <class Stats>
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, const ExponentialProfile& g0, const FlowParams& fp,
                                    Stats stats) {
    std::vector<TrialRecord> out(cfg.trials);
    std::vector<std::string> errors(cfg.trials);
    const auto n = static_cast<long long>(cfg.trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        TrialRecord& tr = out[k];
        tr.trial = k;
        tr.seed = trial_seed(cfg.seed, k);
        tr.N = cfg.N;
        const auto t0 = Clock::now();
        try {
            const RootCloud rc = flowed_roots(g0, fp, CoefficientLaw{cfg.law, tr.seed});
            tr.sweeps = rc.sweeps;
            tr.converged = rc.all_converged();
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const cplx& z : rc.roots) {
                const double m = std::abs(z);
                if (m == 0.0) continue;
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            tr.min_modulus = std::isfinite(lo) ? lo : 0.0;
            tr.max_modulus = hi;
            for (int k = 1; k <= 3; ++k) tr.angular[static_cast<std::size_t>(k - 1)] = angular_uniformity(rc, k);
            stats(rc, tr);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
        tr.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    for (std::size_t k = 0; k < errors.size(); ++k)
        if (!errors[k].empty()) throw std::runtime_error("trial " + std::to_string(k) + ": " + errors[k]);
    return out;
}

RootCloud nonzero_part(const RootCloud& rc) {
    RootCloud out;
    out.source_degree = rc.source_degree;
    for (std::size_t i = 0; i < rc.roots.size(); ++i)
        if (rc.roots[i] != cplx(0.0)) {
            out.roots.push_back(rc.roots[i]);
            out.converged.push_back(rc.converged[i]);
        }
    return out;
}

}  // namespace

ExponentialProfile build_profile(const ProfileSpec& spec) {
    if (spec.family == "kac") return lo_profile(0.0);
    if (spec.family == "weyl") return lo_profile(0.5);
    if (spec.family == "exp") return lo_profile(1.0);
    if (spec.family == "lo") return lo_profile(spec.beta);
    if (spec.family == "grid") {
        std::ifstream in(spec.grid_file);
        if (!in) throw std::runtime_error("cannot open profile grid file '" + spec.grid_file + "'");
        return profile_from_json(nlohmann::json::parse(in));
    }
    throw DomainError("unknown profile family '" + spec.family + "' (kac|weyl|exp|lo|grid)");
}

void ExperimentConfig::validate() const {
    rootflow::validate(flow());
    if (trials > 0 && N < 8) throw DomainError("N must be at least 8");
    if (N * std::max<std::size_t>(trials, 1) > budget)
        throw DomainError("N * trials = " + std::to_string(N * trials) + " exceeds the budget " + std::to_string(budget));
}

bool ExperimentConfig::check_enabled(const std::string& name) const {
    return checks.empty() || std::find(checks.begin(), checks.end(), name) != checks.end();
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    return {{"profile", {{"family", cfg.profile.family}, {"beta", cfg.profile.beta}, {"grid_file", cfg.profile.grid_file}}},
            {"a", cfg.a},
            {"b", cfg.b},
            {"t", cfg.t},
            {"N", cfg.N},
            {"trials", cfg.trials},
            {"seed", cfg.seed},
            {"law", law_name(cfg.law)},
            {"checks", cfg.checks},
            {"ks_threshold", cfg.ks_threshold},
            {"annulus_width", cfg.annulus_width},
            {"ring_fraction_min", cfg.ring_fraction_min},
            {"radius_rel_tol", cfg.radius_rel_tol}};
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(config_to_json(cfg).dump()); }

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

RootCloud flowed_roots(const ExponentialProfile& g0, const FlowParams& fp, const CoefficientLaw& law) {
    const LogCoefficients c0 = sample_polynomial(g0, fp.N, law);
    RootCloud rc = find_roots(flow_coefficients(c0, fp));
    const long long origin = static_cast<long long>(rc.origin_roots) + pt_shift(fp);
    if (origin < 0) throw FlowError("negative origin multiplicity for P_t");
    const std::size_t nonzero = rc.roots.size() - rc.origin_roots;
    rc.roots.resize(nonzero + static_cast<std::size_t>(origin), cplx(0.0));
    rc.converged.resize(rc.roots.size(), 1);
    rc.origin_roots = static_cast<std::size_t>(origin);
    rc.source_degree = rc.roots.size();
    return rc;
}

Report run_diff_pushforward(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.a != 0.0 || cfg.b != 1.0) throw FlowError("repeated differentiation run needs a = 0, b = 1");
    Report r;
    r.kind = "diff_pushforward";
    r.cfg = cfg;
    const ExponentialProfile g0 = build_profile(cfg.profile);
    const RadialMeasure mu0 = kz_measure(g0);
    const RadialMeasure theory = cfg.t == 0.0 ? mu0 : pushforward_mu(mu0, 0.0, 1.0, cfg.t);

    r.trials = run_trials(cfg, g0, cfg.flow(), [&](const RootCloud& rc, TrialRecord& tr) {
        tr.ks = ks_distance(empirical_radial_cdf(rc), theory);
    });
    const double mean_ks = mean_of(r.trials, &TrialRecord::ks);
    const double mean_max = mean_of(r.trials, &TrialRecord::max_modulus);
    r.metrics["mean_ks"] = mean_ks;
    r.metrics["theory_r_out"] = theory.r_out();
    r.metrics["mean_max_modulus"] = mean_max;
    r.metrics["source_strictly_concave"] = g0.strictly_concave ? 1.0 : 0.0;
    double worst_angular = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        double m = 0.0;
        for (const auto& tr : r.trials) m += tr.angular[k];
        m /= std::max<std::size_t>(r.trials.size(), 1);
        r.metrics["mean_angular_k" + std::to_string(k + 1)] = m;
        worst_angular = std::max(worst_angular, m);
    }
    if (!r.trials.empty()) {
        add_check(r, "ks", mean_ks, cfg.ks_threshold, mean_ks < cfg.ks_threshold);
        const double rel = std::abs(mean_max - theory.r_out()) / theory.r_out();
        add_opt_in_check(r, "angular", worst_angular, 0.1, worst_angular < 0.1, "largest mean |<e^{ik theta}>|, k = 1..3");
        // edge outliers make this meaningless for Weyl-type profiles; Kac uses it
        add_opt_in_check(r, "r_out", rel, cfg.radius_rel_tol, rel < cfg.radius_rel_tol, "relative error of max modulus");
    }
    return r;
}

Report run_integration_study(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.b < 0.0)) throw FlowError("integration study needs b < 0");
    if (cfg.a == cfg.b) throw FlowError("a = b with b < 0 is outside the profile-level flow");
    Report r;
    r.kind = "integration_study";
    r.cfg = cfg;
    const ExponentialProfile g0 = build_profile(cfg.profile);
    const FlowParams fp = cfg.flow();
    const ExponentialProfile hull = concave_majorant(qt_profile(g0, fp));
    const RadialMeasure mq = kz_measure(hull);
    const double s = cfg.t * (cfg.a - cfg.b);

    double ring_r = 0.0, ring_m = 0.0;
    for (const auto& at : mq.circle_atoms)
        if (at.mass > ring_m) {
            ring_m = at.mass;
            ring_r = at.radius;
        }
    const bool ring = ring_m > 0.0;
    r.metrics["r_in"] = mq.r_in();
    r.metrics["r_out"] = mq.r_out();
    r.metrics["origin_atom_pt"] = s / (1.0 + s);
    r.metrics["ring_radius"] = ring_r;
    r.metrics["ring_mass"] = ring_m;
    r.metrics["ring_mass_pt"] = ring_m / (1.0 + s);
    if (!hull.flat_segments.empty()) r.metrics["hull_slope"] = hull.flat_segments.front().slope;

    const double w = cfg.annulus_width;
    r.trials = run_trials(cfg, g0, fp, [&](const RootCloud& rc, TrialRecord& tr) {
        const RootCloud nz = nonzero_part(rc);
        tr.ks = ks_distance(empirical_radial_cdf(nz), mq);
        if (ring) {
            std::size_t in = 0;
            for (const cplx& z : nz.roots) {
                const double m = std::abs(z);
                if (m >= ring_r * (1.0 - w) && m <= ring_r * (1.0 + w)) ++in;
            }
            tr.annulus_fraction = static_cast<double>(in) / static_cast<double>(nz.roots.size());
        }
    });
    if (r.trials.empty()) return r;
    const double mean_min = mean_of(r.trials, &TrialRecord::min_modulus);
    const double mean_max = mean_of(r.trials, &TrialRecord::max_modulus);
    r.metrics["mean_min_modulus"] = mean_min;
    r.metrics["mean_max_modulus"] = mean_max;
    r.metrics["mean_ks"] = mean_of(r.trials, &TrialRecord::ks);
    if (ring) {
        const double frac = mean_of(r.trials, &TrialRecord::annulus_fraction);
        r.metrics["mean_annulus_fraction"] = frac;
        add_check(r, "ring_fraction", frac, cfg.ring_fraction_min, frac >= cfg.ring_fraction_min,
                  "fraction of nonzero roots within the relative annulus");
    } else {
        const double e_in = std::abs(mean_min - mq.r_in()) / mq.r_in();
        const double e_out = std::abs(mean_max - mq.r_out()) / mq.r_out();
        add_check(r, "r_in", e_in, cfg.radius_rel_tol, e_in < cfg.radius_rel_tol, "relative error of min modulus");
        add_check(r, "r_out", e_out, cfg.radius_rel_tol, e_out < cfg.radius_rel_tol, "relative error of max modulus");
    }
    return r;
}

Report run_freeconv_suite(const ExperimentConfig& cfg) {
    if (!(cfg.t >= 0.0 && cfg.t < 1.0)) throw FlowError("free convolution suite needs t in [0,1)");
    ExperimentConfig c = cfg;
    c.a = -1.0;
    c.b = 1.0;
    c.t = 0.5 * cfg.t;
    c.validate();
    Report r;
    r.kind = "freeconv_suite";
    r.cfg = cfg;
    const ExponentialProfile g0 = build_profile(cfg.profile);
    const RadialMeasure mu0 = kz_measure(g0);
    const RadialMeasure target = cfg.t == 0.0 ? mu0 : fractional_free_selfconv(mu0, 1.0 / (1.0 - cfg.t), true);

    const RadialMeasure sig = pushforward_sigma(mu0, -1.0, 1.0, c.t);
    const RadialMeasure conv = radial_mult_convolve(mu0, transport_measure(-1.0, 1.0, c.t, mu0.grid_size()));
    double sig_err = 0.0;
    for (std::size_t k = 0; k < sig.grid_size(); ++k)
        sig_err = std::max(sig_err, std::abs(sig.quantile[k] - conv.quantile[k]));
    const double rel = oplus_otimes_relation_check(mu0, cfg.t);
    r.metrics["sigma_otimes_residual"] = sig_err;
    r.metrics["relation_residual"] = rel;
    r.metrics["target_r_out"] = target.r_out();
    add_check(r, "sigma_otimes", sig_err, 1e-10, sig_err < 1e-10);
    add_check(r, "relation", rel, 1e-9, rel < 1e-9);

    r.trials = run_trials(c, g0, c.flow(), [&](const RootCloud& rc, TrialRecord& tr) {
        tr.ks = ks_distance(empirical_radial_cdf(rc), target);
    });
    if (!r.trials.empty()) {
        const double mean_ks = mean_of(r.trials, &TrialRecord::ks);
        r.metrics["mean_ks"] = mean_ks;
        add_check(r, "ks", mean_ks, cfg.ks_threshold, mean_ks < cfg.ks_threshold);
    }
    return r;
}

namespace {

nlohmann::json report_json_impl(const Report& r, bool with_runtime) {
    nlohmann::json trials = nlohmann::json::array();
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& tr : r.trials) {
        nlohmann::json j = {{"trial", tr.trial},         {"seed", tr.seed},
                            {"N", tr.N},                 {"ks", tr.ks},
                            {"min_modulus", tr.min_modulus}, {"max_modulus", tr.max_modulus},
                            {"annulus_fraction", tr.annulus_fraction}, {"angular", tr.angular},
                            {"sweeps", tr.sweeps},
                            {"converged", tr.converged}};
        if (with_runtime) j["runtime_ms"] = tr.runtime_ms;
        trials.push_back(j);
        seeds.push_back(tr.seed);
    }
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"kind", r.kind},
            {"version", kVersion},
            {"config", config_to_json(r.cfg)},
            {"config_hash", hex64(config_hash(r.cfg))},
            {"seeds", seeds},
            {"trials", trials},
            {"checks", checks},
            {"metrics", r.metrics},
            {"pass", r.pass()}};
}

}  // namespace

std::uint64_t report_hash(const Report& r) { return fnv1a(report_json_impl(r, false).dump()); }

nlohmann::json report_to_json(const Report& r) {
    nlohmann::json j = report_json_impl(r, true);
    j["content_hash"] = hex64(report_hash(r));
    return j;
}

std::string report_csv(const Report& r) {
    std::ostringstream os;
    os.precision(17);
    os << "trial,N,ks,runtime_ms\n";
    for (const auto& tr : r.trials) os << tr.trial << ',' << tr.N << ',' << tr.ks << ',' << tr.runtime_ms << '\n';
    return os.str();
}

std::string emit_report(const Report& r, const std::string& format) {
    const std::filesystem::path dir = r.cfg.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(r.cfg.out_dir);
    std::filesystem::create_directories(dir);
    std::filesystem::path path;
    if (format == "json") {
        path = dir / (r.kind + ".json");
        std::ofstream(path) << report_to_json(r).dump(2) << '\n';
    } else if (format == "csv") {
        path = dir / (r.kind + ".csv");
        std::ofstream(path) << report_csv(r);
    } else {
        throw DomainError("unknown report format '" + format + "' (json|csv)");
    }
    if (!std::filesystem::exists(path)) throw std::runtime_error("failed to write " + path.string());
    return path.string();
}

}  // namespace rootflow
