#ifndef ROOTFLOW_FREECONV_HPP
#define ROOTFLOW_FREECONV_HPP

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "rootflow/flow.hpp"

namespace rootflow {

enum class LawFamily { Projection, Xi, Eta, Custom };

// Probability law on [0, inf) with bounded support.
//   Projection: nu_gamma = gamma delta_0 + (1 - gamma) delta_1
//   Xi:         xi_gamma, density on (0, 4 gamma/(1+gamma)^2) plus max(0, 1-gamma) at 1
//   Eta:        eta_gamma, known only through S(z) = exp(gamma/(z+1))
//   Custom:     density on [lo, hi] plus atoms, or a closed-form S-transform
struct PositiveLaw {
    LawFamily family = LawFamily::Custom;
    double gamma = 0.0;
    std::function<double(double)> density;
    double support_lo = 0.0;
    double support_hi = 0.0;
    std::vector<std::pair<double, double>> atoms;  // (point, mass)
    std::function<cplx(cplx)> s_closed;

    double mass_at_zero() const;
};

PositiveLaw projection_law(double gamma);
PositiveLaw xi_law(double gamma);
PositiveLaw eta_law(double gamma);
PositiveLaw dirac_law(double x);
// Law of |R_t^{a,b}|^2, through its closed-form S-transform.
PositiveLaw rtab_law(double a, double b, double t);

cplx psi_transform(const PositiveLaw& law, cplx z);
// Solves psi(z S/(z+1)) = z on the negative real axis by safeguarded Newton.
double s_transform_numeric(const PositiveLaw& law, double z);
cplx s_transform_rtab(double a, double b, double t, cplx z);

double xi_gamma_density(double gamma, double x);
double xi_gamma_atom(double gamma);
// Total mass of xi_gamma by quadrature (continuous part) plus the atom.
double xi_gamma_mass(double gamma);

// 1/sqrt(S(alpha - 1)); 0 at or below the law's mass at zero.
double hl_quantile_from_s(const PositiveLaw& law, double alpha);
double hl_quantile_from_s(const std::function<double(double)>& S, double alpha, double mass_at_zero);

cplx cauchy_transform_xi(double gamma, cplx z);

}  // namespace rootflow

#endif  // ROOTFLOW_FREECONV_HPP
