#ifndef ROOTFLOW_FLOW_HPP
#define ROOTFLOW_FLOW_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "rootflow/profiles.hpp"

namespace rootflow {

using cplx = std::complex<double>;

struct FlowParams {
    double a = 0.0;
    double b = 1.0;
    double t = 0.0;
    std::size_t N = 1;
};

// Coefficients c_j = exp(log_mag[j]) * phase[j], j = 0..degree. log_mag = -inf
// marks an exact zero.
struct LogCoefficients {
    std::vector<double> log_mag;
    std::vector<cplx> phase;

    std::size_t degree() const { return log_mag.empty() ? 0 : log_mag.size() - 1; }
    bool is_zero(std::size_t j) const;
    cplx coefficient(std::size_t j) const;
};

LogCoefficients from_coefficients(const std::vector<cplx>& c);
std::vector<cplx> to_coefficients(const LogCoefficients& c);

// 1/(b-a) for a < b, +inf otherwise.
double t_max(double a, double b);
double alpha_min_t(const FlowParams& fp);
// First index that survives the flow: ceil(N t (b-a)) for a < b, 0 otherwise.
// Lattice values of N t (b-a) are snapped before rounding.
std::size_t j_min(const FlowParams& fp);
// Number of D^{a,b} applications: #{m >= 0 : m <= N t - 1}.
std::size_t flow_steps(const FlowParams& fp);
// Exponent of the z-power relating P_t and Q_t: floor(N t (a-b)).
long long pt_shift(const FlowParams& fp);

// Throws FlowError when t is negative or t >= t_max.
void validate(const FlowParams& fp);

// Q_t^N from Q_0^N. The Gamma products run on the OpenMP kernel; pass
// serial = true to use the reference kernel instead.
LogCoefficients flow_coefficients(const LogCoefficients& c0, const FlowParams& fp, bool serial = false);

std::size_t detect_j0(const LogCoefficients& c, const FlowParams& fp);

ExponentialProfile qt_profile(const ExponentialProfile& g0, const FlowParams& fp);
ExponentialProfile pt_profile(const ExponentialProfile& g0, const FlowParams& fp);

// log Gamma(z) - log Gamma(z - b) - b log z.
double gamma_ratio_check(double z, double b);

}  // namespace rootflow

#endif  // ROOTFLOW_FLOW_HPP
