#ifndef ROOTFLOW_JSON_IO_HPP
#define ROOTFLOW_JSON_IO_HPP

#include <json.hpp>

#include "rootflow/flow.hpp"
#include "rootflow/profiles.hpp"

namespace rootflow {

// -inf is written as null.
nlohmann::json profile_to_json(const ExponentialProfile& p);
ExponentialProfile profile_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const RadialMeasure& m);
RadialMeasure measure_from_json(const nlohmann::json& j);

// [[log_mag, phase_re, phase_im], ...]
nlohmann::json coefficients_to_json(const LogCoefficients& c);
LogCoefficients coefficients_from_json(const nlohmann::json& j);

}  // namespace rootflow

#endif  // ROOTFLOW_JSON_IO_HPP
