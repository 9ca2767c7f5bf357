#ifndef ROOTFLOW_POTENTIAL_HPP
#define ROOTFLOW_POTENTIAL_HPP

#include <complex>

#include "rootflow/flow.hpp"
#include "rootflow/profiles.hpp"

namespace rootflow {

// Log potentials of the flowed measures built from g_0 and (a, b). Time is a
// call argument so the PDE check can difference in t.
struct PotentialField {
    ExponentialProfile g0;
    double a = 0.0;
    double b = 1.0;

    PotentialField(ExponentialProfile profile, double a_, double b_);

    double gt(double alpha, double t) const;
    double dgt(double alpha, double t) const;
    double alpha_min(double t) const;
    // argmax over [alpha_min^t, 1] of 2 g_t(alpha) + alpha log r^2
    double alpha_star(double r, double t) const;
    double r_out(double t) const;
};

// Trajectory point of the Hamiltonian flow.
struct CharacteristicState {
    cplx z;
    cplx p;
    double t = 0.0;
};

double log_potential_W(const PotentialField& f, cplx z, double t);
double log_potential_V(const PotentialField& f, cplx z, double t);
double rescaled_potential_S(const PotentialField& f, cplx z, double t);

// dS/dz = (S_x - i S_y)/2 by central differences of step h.
cplx ds_dz(const PotentialField& f, cplx z, double t, double h);
// (alpha* + t(a-b))/z from the envelope of the maximization.
cplx ds_dz_analytic(const PotentialField& f, cplx z, double t);

// |dS/dt - log|z^a (dS/dz)^b|^2| with central differences of step h.
double pde_residual(const PotentialField& f, cplx z, double t, double h);

// m(z) = alpha_0(|z|)/z.
cplx cauchy_transform(const RadialMeasure& mu, cplx z);

cplx characteristic_curve(cplx z0, cplx p0, double a, double b, double t);
CharacteristicState characteristic_state(cplx z0, cplx p0, double a, double b, double t);

double curve_transport_consistency(const RadialMeasure& mu0, double a, double b, double t, cplx w);

}  // namespace rootflow

#endif  // ROOTFLOW_POTENTIAL_HPP
