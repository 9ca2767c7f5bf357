#ifndef ROOTFLOW_HARNESS_HPP
#define ROOTFLOW_HARNESS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rootflow/flow.hpp"
#include "rootflow/polyroots.hpp"
#include "rootflow/profiles.hpp"

namespace rootflow {

inline constexpr const char* kVersion = "rootflow 0.1.0";

struct ProfileSpec {
    std::string family = "weyl";  // kac | weyl | exp | lo | grid
    double beta = 0.5;            // used by lo
    std::string grid_file;        // used by grid: JSON {alpha_min, grid, concave}
};

ExponentialProfile build_profile(const ProfileSpec& spec);

struct ExperimentConfig {
    ProfileSpec profile;
    double a = 0.0;
    double b = 1.0;
    double t = 0.0;
    std::size_t N = 500;
    std::size_t trials = 20;
    std::uint64_t seed = 7;
    CoefficientTag law = CoefficientTag::ComplexGaussian;
    std::string out_dir;
    std::vector<std::string> checks;  // empty: all checks of the run
    std::size_t budget = 20'000'000;  // cap on N * trials

    double ks_threshold = 0.1;
    double annulus_width = 0.03;     // relative half width around a ring
    double ring_fraction_min = 0.30;
    double radius_rel_tol = 0.05;

    FlowParams flow() const { return {a, b, t, N}; }
    void validate() const;
    bool check_enabled(const std::string& name) const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t N = 0;
    double ks = 0.0;
    double runtime_ms = 0.0;
    double min_modulus = 0.0;  // over nonzero roots
    double max_modulus = 0.0;
    double annulus_fraction = 0.0;
    std::array<double, 3> angular{};  // angular_uniformity for k = 1, 2, 3
    std::size_t sweeps = 0;
    bool converged = true;
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string kind;
    ExperimentConfig cfg;
    std::vector<TrialRecord> trials;
    std::vector<CheckResult> checks;
    std::map<std::string, double> metrics;

    bool pass() const;
};

// Roots of P_t^N for one sampled polynomial: roots of Q_t^N with the origin
// multiplicity shifted by floor(N t (a-b)).
RootCloud flowed_roots(const ExponentialProfile& g0, const FlowParams& fp, const CoefficientLaw& law);

Report run_diff_pushforward(const ExperimentConfig& cfg);
Report run_integration_study(const ExperimentConfig& cfg);
Report run_freeconv_suite(const ExperimentConfig& cfg);

nlohmann::json report_to_json(const Report& r);
// FNV-1a over the report JSON with runtimes stripped.
std::uint64_t report_hash(const Report& r);
std::string report_csv(const Report& r);
// Writes <out_dir>/<kind>.json or .csv; returns the path.
std::string emit_report(const Report& r, const std::string& format);

std::uint64_t fnv1a(const std::string& s);

}  // namespace rootflow

#endif  // ROOTFLOW_HARNESS_HPP
