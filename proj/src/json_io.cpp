#include "rootflow/json_io.hpp"

#include <cmath>
#include <limits>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json ext(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }
double ext_from(const nlohmann::json& j) { return j.is_null() ? -kInf : j.get<double>(); }

}  // namespace

nlohmann::json profile_to_json(const ExponentialProfile& p) {
    nlohmann::json grid = nlohmann::json::array();
    for (double v : p.grid) grid.push_back(ext(v));
    return {{"alpha_min", p.alpha_min}, {"grid", grid}, {"concave", p.concave}};
}

ExponentialProfile profile_from_json(const nlohmann::json& j) {
    std::vector<double> v;
    for (const auto& x : j.at("grid")) v.push_back(ext_from(x));
    ExponentialProfile p = profile_from_grid(j.at("alpha_min").get<double>(), std::move(v));
    // the flag is recomputed from the data; a mismatch with the file is not an error
    return p;
}

nlohmann::json measure_to_json(const RadialMeasure& m) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.circle_atoms) atoms.push_back({a.radius, a.mass});
    return {{"quantile", m.quantile}, {"atom0", m.atom0_mass}, {"circle_atoms", atoms}};
}

RadialMeasure measure_from_json(const nlohmann::json& j) {
    RadialMeasure m = measure_from_grid(j.at("quantile").get<std::vector<double>>());
    m.atom0_mass = j.at("atom0").get<double>();
    if (j.contains("circle_atoms")) {
        m.circle_atoms.clear();
        for (const auto& a : j.at("circle_atoms")) m.circle_atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    }
    return m;
}

nlohmann::json coefficients_to_json(const LogCoefficients& c) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t j = 0; j < c.log_mag.size(); ++j)
        out.push_back({ext(c.log_mag[j]), c.phase[j].real(), c.phase[j].imag()});
    return out;
}

LogCoefficients coefficients_from_json(const nlohmann::json& j) {
    LogCoefficients c;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3) throw DomainError("coefficient entries must be [log_mag, re, im]");
        c.log_mag.push_back(ext_from(e.at(0)));
        c.phase.emplace_back(e.at(1).get<double>(), e.at(2).get<double>());
    }
    return c;
}

}  // namespace rootflow
