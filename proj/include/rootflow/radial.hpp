#ifndef ROOTFLOW_RADIAL_HPP
#define ROOTFLOW_RADIAL_HPP

#include <complex>

#include "rootflow/flow.hpp"
#include "rootflow/profiles.hpp"

namespace rootflow {

// T_t for the flow (a, b, t), driven by the source measure's alpha_0.
struct TransportMap {
    double a = 0.0;
    double b = 1.0;
    double t = 0.0;
    RadialMeasure source;
};

cplx transport_point(const TransportMap& T, cplx w);

// r_t^{a,b}(alpha), the quantile of the transport measure rho_t^{a,b}.
double transport_quantile(double a, double b, double t, double alpha);
RadialMeasure transport_measure(double a, double b, double t, std::size_t grid_size = kDefaultGridSize);

RadialMeasure pushforward_sigma(const RadialMeasure& mu0, double a, double b, double t);
RadialMeasure pushforward_mu(const RadialMeasure& mu0, double a, double b, double t);

// Quantile product on the finer of the two grids.
RadialMeasure radial_mult_convolve(const RadialMeasure& m1, const RadialMeasure& m2);

// mu^{(+)k}; hat = true gives the 1/k-dilated version.
RadialMeasure fractional_free_selfconv(const RadialMeasure& mu, double k, bool hat);

RadialMeasure dilate(const RadialMeasure& mu, double c);
// s delta_0 + (1 - s) mu
RadialMeasure mix_origin(const RadialMeasure& mu, double s);

// sup over the grid of |q(mu0 (x) rho^_t) - q(t delta_0 + (1-t) mu0^{(+)1/(1-t)})|.
double oplus_otimes_relation_check(const RadialMeasure& mu0, double t);

// Kac demo of the randomized transport for a non-strict source: a point w on
// the unit circle carrying an independent uniform label u moves to
// w * r_t^{a,b}(u).
cplx kac_randomized_transport(cplx w, double u, double a, double b, double t);

}  // namespace rootflow

#endif  // ROOTFLOW_RADIAL_HPP
