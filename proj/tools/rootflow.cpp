// Command line front end. Every subcommand prints JSON or CSV to stdout, or
// writes it under --out. The exit code is 1 when an enabled check fails.
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rootflow/errors.hpp"
#include "rootflow/flow.hpp"
#include "rootflow/freeconv.hpp"
#include "rootflow/harness.hpp"
#include "rootflow/json_io.hpp"
#include "rootflow/polyroots.hpp"
#include "rootflow/potential.hpp"
#include "rootflow/profiles.hpp"
#include "rootflow/radial.hpp"

using namespace rootflow;
using nlohmann::json;

namespace {

struct Globals {
    std::uint64_t seed = 7;
    std::string out;
    std::string format = "json";
};

std::vector<double> parse_list(const std::string& s, std::size_t want, const std::string& what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != want)
        throw CLI::ValidationError(what, "expected " + std::to_string(want) + " comma separated numbers");
    return v;
}

// Writes text to <out>/<name> when --out is set, stdout otherwise.
void emit(const Globals& g, const std::string& name, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::filesystem::create_directories(g.out);
    const auto path = std::filesystem::path(g.out) / name;
    std::ofstream(path) << text;
    std::cerr << "wrote " << path.string() << '\n';
}

std::string ext_of(const Globals& g) { return g.format == "csv" ? ".csv" : ".json"; }

CoefficientTag parse_law(const std::string& s) {
    if (s == "complex") return CoefficientTag::ComplexGaussian;
    if (s == "real") return CoefficientTag::RealGaussian;
    if (s == "rademacher") return CoefficientTag::Rademacher;
    throw CLI::ValidationError("--law", "complex|real|rademacher");
}

struct ProfileOpts {
    std::string family = "weyl";
    double beta = 0.5;
    std::string grid_file;
    void add(CLI::App* app) {
        app->add_option("--profile", family, "kac|weyl|exp|lo|grid")->capture_default_str();
        app->add_option("--beta", beta, "Littlewood-Offord parameter for --profile lo")->capture_default_str();
        app->add_option("--grid-file", grid_file, "profile JSON for --profile grid");
    }
    ProfileSpec spec() const { return {family, beta, grid_file}; }
};

struct RunOpts {
    ProfileOpts prof;
    std::string flow = "0,1,0";
    std::size_t N = 500;
    std::size_t trials = 20;
    std::string law = "complex";
    std::vector<std::string> checks;
    double ks = 0.1;
    void add(CLI::App* app, const std::string& default_flow) {
        flow = default_flow;
        prof.add(app);
        app->add_option("--flow", flow, "a,b,t")->capture_default_str();
        app->add_option("--N", N, "degree")->capture_default_str();
        app->add_option("--trials", trials, "number of sampled polynomials")->capture_default_str();
        app->add_option("--law", law, "complex|real|rademacher")->capture_default_str();
        app->add_option("--checks", checks, "restrict to these checks")->delimiter(',');
        app->add_option("--ks-threshold", ks, "KS pass threshold")->capture_default_str();
    }
    ExperimentConfig config(const Globals& g) const {
        const auto f = parse_list(flow, 3, "--flow");
        ExperimentConfig c;
        c.profile = prof.spec();
        c.a = f[0];
        c.b = f[1];
        c.t = f[2];
        c.N = N;
        c.trials = trials;
        c.seed = g.seed;
        c.law = parse_law(law);
        c.out_dir = g.out;
        c.checks = checks;
        c.ks_threshold = ks;
        return c;
    }
};

int finish_report(const Globals& g, const Report& r) {
    if (g.out.empty()) {
        std::cout << (g.format == "csv" ? report_csv(r) : report_to_json(r).dump(2) + "\n");
    } else {
        std::cerr << "wrote " << emit_report(r, g.format) << '\n';
    }
    for (const auto& c : r.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " threshold=" << c.threshold
                  << '\n';
    return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional differential flow of random polynomials: theory and Monte-Carlo checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "base seed")->capture_default_str();
    app.add_option("--out", g.out, "output directory (stdout when omitted)");
    app.add_option("--format", g.format, "json|csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    // profile
    auto* c_prof = app.add_subcommand("profile", "exponential profile, its concave majorant and limiting measure");
    ProfileOpts prof_opts;
    bool majorant = false;
    prof_opts.add(c_prof);
    c_prof->add_flag("--majorant", majorant, "emit the concave majorant instead of the profile");

    // flow
    auto* c_flow = app.add_subcommand("flow", "apply the flow to sampled or given coefficients");
    RunOpts flow_opts;
    std::string coeff_file;
    bool flow_profile = false;
    flow_opts.add(c_flow, "0,1,0.25");
    c_flow->add_option("--coeffs", coeff_file, "coefficient JSON [[log_mag, re, im], ...]");
    c_flow->add_flag("--profile-level", flow_profile, "emit the flowed profiles g_t, h_t instead");

    // roots
    auto* c_roots = app.add_subcommand("roots", "roots of P_t^N for sampled polynomials");
    RunOpts roots_opts;
    roots_opts.add(c_roots, "0,1,0");
    roots_opts.trials = 1;

    // compare
    auto* c_cmp = app.add_subcommand("compare", "empirical roots vs push-forward theory (a=0, b=1)");
    RunOpts cmp_opts;
    cmp_opts.add(c_cmp, "0,1,0.4");

    // pde-check
    auto* c_pde = app.add_subcommand("pde-check", "residual of the log-potential PDE on a polar grid");
    ProfileOpts pde_prof;
    std::string pde_flow = "0,1,0.3", pde_grid = "20,8";
    double pde_h = 1e-4, pde_tol = 1e-5;
    c_pde->set_help_flag("--help", "Print this help message and exit");  // frees --h for the step
    pde_prof.add(c_pde);
    c_pde->add_option("--flow", pde_flow, "a,b,t")->capture_default_str();
    c_pde->add_option("--grid", pde_grid, "nr,ntheta")->capture_default_str();
    c_pde->add_option("--h", pde_h, "finite-difference step")->capture_default_str();
    c_pde->add_option("--tol", pde_tol, "pass threshold")->capture_default_str();

    // curves
    auto* c_cur = app.add_subcommand("curves", "characteristic curves from seed points");
    ProfileOpts cur_prof;
    std::string cur_flow = "0,1,0.3", seeds_file;
    std::size_t cur_steps = 10;
    cur_prof.add(c_cur);
    c_cur->add_option("--flow", cur_flow, "a,b,t_end")->capture_default_str();
    c_cur->add_option("--seeds", seeds_file, "JSON [[re, im], ...]; default 8 points on |w| = 0.9");
    c_cur->add_option("--steps", cur_steps, "time samples per curve")->capture_default_str();

    // convolve
    auto* c_conv = app.add_subcommand("convolve", "radial measure operations");
    ProfileOpts conv_prof, conv_prof2;
    std::string conv_op = "transport", conv_flow = "0,1,0.4", conv_prof2_family;
    double conv_k = 2.0;
    bool conv_hat = false;
    conv_prof.add(c_conv);
    c_conv->add_option("--op", conv_op, "otimes|oplus|transport")
        ->check(CLI::IsMember({"otimes", "oplus", "transport"}))
        ->capture_default_str();
    c_conv->add_option("--flow", conv_flow, "a,b,t (transport, and otimes with rho_t)")->capture_default_str();
    c_conv->add_option("--with", conv_prof2_family, "second profile for otimes (default: rho_t of --flow)");
    c_conv->add_option("--k", conv_k, "oplus power")->capture_default_str();
    c_conv->add_flag("--hat", conv_hat, "1/k dilated oplus power");

    // stransform
    auto* c_st = app.add_subcommand("stransform", "psi and S transforms of positive laws");
    std::string st_family = "nu", st_flow = "0,1,0.3";
    double st_gamma = 0.3;
    std::vector<double> st_z{-0.1};
    c_st->add_option("--family", st_family, "nu|xi|eta|rtab")
        ->check(CLI::IsMember({"nu", "xi", "eta", "rtab"}))
        ->capture_default_str();
    c_st->add_option("--gamma", st_gamma, "family parameter")->capture_default_str();
    c_st->add_option("--flow", st_flow, "a,b,t for rtab")->capture_default_str();
    c_st->add_option("--z", st_z, "evaluation points in (-1, 0]");

    // studies
    auto* c_int = app.add_subcommand("study-integration", "b < 0 concave-majorant study");
    RunOpts int_opts;
    double int_width = 0.03, int_frac = 0.30, int_tol = 0.05;
    int_opts.add(c_int, "0,-1,0.15");
    int_opts.trials = 10;
    c_int->add_option("--annulus", int_width, "relative annulus half width")->capture_default_str();
    c_int->add_option("--ring-fraction", int_frac, "minimum empirical ring fraction")->capture_default_str();
    c_int->add_option("--radius-tol", int_tol, "relative tolerance on r_in/r_out")->capture_default_str();

    auto* c_fc = app.add_subcommand("study-freeconv", "a=-1, b=1 flow at t/2 vs fractional free convolution");
    RunOpts fc_opts;
    fc_opts.add(c_fc, "-1,1,0.5");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_prof->parsed()) {
            ExponentialProfile p = build_profile(prof_opts.spec());
            if (majorant) p = concave_majorant(p);
            const RadialMeasure m = kz_measure(p);
            if (g.format == "csv") {
                std::ostringstream os;
                os.precision(17);
                os << "alpha,g,quantile\n";
                for (std::size_t i = 0; i < p.grid_size(); ++i) {
                    const double al = p.alpha_at(i);
                    os << al << ',' << p.grid[i] << ',' << m.quantile_at(al) << '\n';
                }
                emit(g, "profile.csv", os.str());
            } else {
                json j = {{"profile", profile_to_json(p)}, {"measure", measure_to_json(m)}};
                emit(g, "profile.json", j.dump(2));
            }
            return 0;
        }
        if (c_flow->parsed()) {
            const auto cfg = flow_opts.config(g);
            const FlowParams fp = cfg.flow();
            const ExponentialProfile g0 = build_profile(cfg.profile);
            if (flow_profile) {
                const ExponentialProfile gt = qt_profile(g0, fp), ht = pt_profile(g0, fp);
                json j = {{"t_max", t_max(fp.a, fp.b)}, {"alpha_min_t", alpha_min_t(fp)},
                          {"g_t", profile_to_json(gt)}, {"h_t", profile_to_json(ht)}};
                emit(g, "flow_profile.json", j.dump(2));
                return 0;
            }
            LogCoefficients c0;
            if (!coeff_file.empty()) {
                std::ifstream in(coeff_file);
                if (!in) throw std::runtime_error("cannot open " + coeff_file);
                c0 = coefficients_from_json(json::parse(in));
            } else {
                c0 = sample_polynomial(g0, fp.N, {cfg.law, g.seed});
            }
            FlowParams fpc = fp;
            fpc.N = c0.degree();
            const LogCoefficients ct = flow_coefficients(c0, fpc);
            json j = {{"N", fpc.N},
                      {"flow", {fp.a, fp.b, fp.t}},
                      {"t_max", std::isfinite(t_max(fp.a, fp.b)) ? json(t_max(fp.a, fp.b)) : json("inf")},
                      {"j_min", j_min(fpc)},
                      {"j0", detect_j0(ct, fpc)},
                      {"pt_shift", pt_shift(fpc)},
                      {"coefficients", coefficients_to_json(ct)}};
            emit(g, "flow.json", j.dump(2));
            return 0;
        }
        if (c_roots->parsed()) {
            const auto cfg = roots_opts.config(g);
            cfg.validate();
            const ExponentialProfile g0 = build_profile(cfg.profile);
            std::ostringstream os;
            os.precision(17);
            json all = json::array();
            if (g.format == "csv") os << "trial,re,im\n";
            for (std::size_t k = 0; k < cfg.trials; ++k) {
                const RootCloud rc = flowed_roots(g0, cfg.flow(), {cfg.law, trial_seed(cfg.seed, k)});
                json roots = json::array();
                for (const cplx& z : rc.roots) {
                    if (g.format == "csv") os << k << ',' << z.real() << ',' << z.imag() << '\n';
                    roots.push_back({z.real(), z.imag()});
                }
                all.push_back({{"trial", k}, {"seed", trial_seed(cfg.seed, k)}, {"sweeps", rc.sweeps},
                               {"converged", rc.all_converged()}, {"roots", roots}});
            }
            emit(g, "roots" + ext_of(g), g.format == "csv" ? os.str() : all.dump(2));
            return 0;
        }
        if (c_cmp->parsed()) return finish_report(g, run_diff_pushforward(cmp_opts.config(g)));
        if (c_int->parsed()) {
            auto cfg = int_opts.config(g);
            cfg.annulus_width = int_width;
            cfg.ring_fraction_min = int_frac;
            cfg.radius_rel_tol = int_tol;
            return finish_report(g, run_integration_study(cfg));
        }
        if (c_fc->parsed()) return finish_report(g, run_freeconv_suite(fc_opts.config(g)));
        if (c_pde->parsed()) {
            const auto f = parse_list(pde_flow, 3, "--flow");
            const auto grid = parse_list(pde_grid, 2, "--grid");
            const PotentialField field(build_profile(pde_prof.spec()), f[0], f[1]);
            const double rout = field.r_out(f[2]);
            const auto nr = static_cast<int>(grid[0]), nth = static_cast<int>(grid[1]);
            double worst = 0.0;
            std::ostringstream os;
            os.precision(17);
            os << "r,theta,residual\n";
            for (int i = 0; i < nr; ++i)
                for (int k = 0; k < nth; ++k) {
                    const double r = rout * (0.1 + 0.8 * i / std::max(nr - 1, 1));
                    const double th = 2.0 * M_PI * k / nth;
                    const double res = pde_residual(field, std::polar(r, th), f[2], pde_h);
                    worst = std::max(worst, res);
                    os << r << ',' << th << ',' << res << '\n';
                }
            if (g.format == "csv")
                emit(g, "pde_check.csv", os.str());
            else
                emit(g, "pde_check.json",
                     json({{"max_residual", worst}, {"tolerance", pde_tol}, {"r_out", rout}, {"pass", worst < pde_tol}})
                         .dump(2));
            std::cerr << (worst < pde_tol ? "PASS" : "FAIL") << " pde max_residual=" << worst << '\n';
            return worst < pde_tol ? 0 : 1;
        }
        if (c_cur->parsed()) {
            const auto f = parse_list(cur_flow, 3, "--flow");
            const RadialMeasure mu0 = kz_measure(build_profile(cur_prof.spec()));
            std::vector<cplx> seeds;
            if (!seeds_file.empty()) {
                std::ifstream in(seeds_file);
                if (!in) throw std::runtime_error("cannot open " + seeds_file);
                for (const auto& s : json::parse(in)) seeds.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
            } else {
                for (int k = 0; k < 8; ++k) seeds.push_back(std::polar(0.9, 2.0 * M_PI * k / 8 + 0.1));
            }
            std::ostringstream os;
            os.precision(17);
            os << "seed,t,re_z,im_z,re_p,im_p\n";
            for (std::size_t s = 0; s < seeds.size(); ++s) {
                const cplx p0 = cauchy_transform(mu0, seeds[s]);
                for (std::size_t i = 0; i <= cur_steps; ++i) {
                    const double t = f[2] * static_cast<double>(i) / static_cast<double>(cur_steps);
                    const auto st = characteristic_state(seeds[s], p0, f[0], f[1], t);
                    os << s << ',' << t << ',' << st.z.real() << ',' << st.z.imag() << ',' << st.p.real() << ','
                       << st.p.imag() << '\n';
                }
            }
            emit(g, "curves.csv", os.str());
            return 0;
        }
        if (c_conv->parsed()) {
            const auto f = parse_list(conv_flow, 3, "--flow");
            const RadialMeasure mu = kz_measure(build_profile(conv_prof.spec()));
            RadialMeasure out;
            if (conv_op == "transport") {
                out = pushforward_mu(mu, f[0], f[1], f[2]);
            } else if (conv_op == "oplus") {
                out = fractional_free_selfconv(mu, conv_k, conv_hat);
            } else {
                const RadialMeasure other = conv_prof2_family.empty()
                                                ? transport_measure(f[0], f[1], f[2], mu.grid_size())
                                                : kz_measure(build_profile({conv_prof2_family, conv_prof.beta, ""}));
                out = radial_mult_convolve(mu, other);
            }
            if (g.format == "csv") {
                std::ostringstream os;
                os.precision(17);
                os << "alpha,quantile\n";
                for (std::size_t k = 0; k < out.grid_size(); ++k) os << out.alpha_at(k) << ',' << out.quantile[k] << '\n';
                emit(g, "measure.csv", os.str());
            } else {
                emit(g, "measure.json", measure_to_json(out).dump(2));
            }
            return 0;
        }
        if (c_st->parsed()) {
            json rows = json::array();
            for (double z : st_z) {
                json row = {{"z", z}};
                if (st_family == "rtab") {
                    const auto f = parse_list(st_flow, 3, "--flow");
                    const cplx s = s_transform_rtab(f[0], f[1], f[2], z);
                    row["S"] = {s.real(), s.imag()};
                    row["hl_quantile"] = hl_quantile_from_s(rtab_law(f[0], f[1], f[2]), z + 1.0);
                } else {
                    const PositiveLaw law = st_family == "nu"   ? projection_law(st_gamma)
                                            : st_family == "xi" ? xi_law(st_gamma)
                                                                : eta_law(st_gamma);
                    const double s = s_transform_numeric(law, z);
                    row["S"] = s;
                    row["psi_roundtrip"] = std::abs(psi_transform(law, z / (z + 1.0) * s).real() - z);
                }
                rows.push_back(row);
            }
            emit(g, "stransform.json", rows.dump(2));
            return 0;
        }
    } catch (const CLI::Error&) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
