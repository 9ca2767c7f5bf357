#include "rootflow/freeconv.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kHalfPi = boost::math::constants::half_pi<double>();
constexpr double kQuadTol = 1e-14;  // 1e-15 never settles for gamma > 1 and recurses to full depth
constexpr unsigned kQuadDepth = 20;

template <class F>
double integrate(F f, double lo, double hi) {
    return gauss_kronrod<double, 61>::integrate(f, lo, hi, kQuadDepth, kQuadTol);
}

double xi_edge(double gamma) { return 4.0 * gamma / ((1.0 + gamma) * (1.0 + gamma)); }

// xi_gamma continuous part integrated against phi, after x = c sin^2(theta):
// the measure becomes (1+gamma) c cos^2 / (pi (1 - c sin^2)) d theta, smooth on [0, pi/2].
template <class Phi>
double xi_integral(double gamma, Phi phi) {
    const double c = xi_edge(gamma);
    auto f = [&](double th) {
        const double s = std::sin(th), co = std::cos(th);
        const double den = co * co + (1.0 - c) * s * s;
        return (1.0 + gamma) * c * co * co / (kPi * den) * phi(c * s * s);
    };
    return integrate(f, 0.0, kHalfPi);
}

// Integral of phi against the law, atoms included; phi is real valued.
template <class Phi>
double law_integral(const PositiveLaw& law, Phi phi) {
    double acc = 0.0;
    switch (law.family) {
        case LawFamily::Projection:
            return law.gamma * phi(0.0) + (1.0 - law.gamma) * phi(1.0);
        case LawFamily::Xi:
            acc = xi_integral(law.gamma, phi);
            return acc + xi_gamma_atom(law.gamma) * phi(1.0);
        default:
            break;
    }
    if (law.density) acc = integrate([&](double x) { return law.density(x) * phi(x); }, law.support_lo, law.support_hi);
    for (const auto& [x, m] : law.atoms) acc += m * phi(x);
    return acc;
}

bool only_s_transform(const PositiveLaw& law) {
    return static_cast<bool>(law.s_closed) && !law.density && law.atoms.empty();
}

double support_top(const PositiveLaw& law) {
    switch (law.family) {
        case LawFamily::Projection:
            return law.gamma < 1.0 ? 1.0 : 0.0;
        case LawFamily::Xi:
            return law.gamma < 1.0 ? 1.0 : xi_edge(law.gamma);
        default:
            break;
    }
    double top = law.density ? law.support_hi : 0.0;
    for (const auto& [x, m] : law.atoms)
        if (m > 0.0) top = std::max(top, x);
    return top;
}

// psi on the negative axis for laws given only by S: invert chi(z) = z S(z)/(z+1).
double psi_from_s(const PositiveLaw& law, double w) {
    if (w == 0.0) return 0.0;
    auto chi = [&](double z) { return z * law.s_closed(cplx(z)).real() / (z + 1.0); };
    double lo = law.mass_at_zero() - 1.0, hi = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi(mid) < w)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double psi_real(const PositiveLaw& law, double w) {
    if (only_s_transform(law)) return psi_from_s(law, w);
    return law_integral(law, [w](double x) { return w * x / (1.0 - w * x); });
}

double psi_real_deriv(const PositiveLaw& law, double w) {
    if (only_s_transform(law)) {
        const double h = 1e-7 * (1.0 + std::abs(w));
        return (psi_from_s(law, w + h) - psi_from_s(law, w - h)) / (2.0 * h);
    }
    return law_integral(law, [w](double x) {
        const double d = 1.0 - w * x;
        return x / (d * d);
    });
}

}  // namespace

double PositiveLaw::mass_at_zero() const {
    switch (family) {
        case LawFamily::Projection:
            return gamma;
        case LawFamily::Xi:
        case LawFamily::Eta:
            return 0.0;
        case LawFamily::Custom:
            break;
    }
    double m0 = 0.0;
    for (const auto& [x, m] : atoms)
        if (x == 0.0) m0 += m;
    if (only_s_transform(*this)) m0 = gamma;  // rtab_law stores its origin mass here
    return m0;
}

PositiveLaw projection_law(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("nu_gamma needs gamma in [0,1]");
    PositiveLaw l;
    l.family = LawFamily::Projection;
    l.gamma = gamma;
    return l;
}

PositiveLaw xi_law(double gamma) {
    if (!(gamma > 0.0)) throw DomainError("xi_gamma needs gamma > 0");
    PositiveLaw l;
    l.family = LawFamily::Xi;
    l.gamma = gamma;
    return l;
}

PositiveLaw eta_law(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("eta_gamma needs gamma >= 0");
    PositiveLaw l;
    l.family = LawFamily::Eta;
    l.gamma = gamma;
    l.s_closed = [gamma](cplx z) { return std::exp(gamma / (z + 1.0)); };
    return l;
}

PositiveLaw dirac_law(double x) {
    if (!(x >= 0.0)) throw DomainError("dirac_law needs x >= 0");
    PositiveLaw l;
    l.atoms = {{x, 1.0}};
    return l;
}

PositiveLaw rtab_law(double a, double b, double t) {
    if (!(t >= 0.0 && t < t_max(a, b))) throw FlowError("rtab_law needs 0 <= t < t_max");
    PositiveLaw l;
    l.gamma = a < b ? t * (b - a) : 0.0;
    l.s_closed = [a, b, t](cplx z) { return s_transform_rtab(a, b, t, z); };
    return l;
}

cplx psi_transform(const PositiveLaw& law, cplx z) {
    if (z == cplx(0.0)) return 0.0;
    const double top = support_top(law);
    if (z.imag() == 0.0 && z.real() > 0.0 && z.real() * top >= 1.0)
        throw DomainError("psi_transform: 1/z lies in the support");
    if (law.family == LawFamily::Projection) return (1.0 - law.gamma) * z / (1.0 - z);
    if (only_s_transform(law)) {
        if (z.imag() != 0.0 || z.real() > 0.0)
            throw DomainError("psi_transform of an S-only law is available on the negative axis");
        return psi_from_s(law, z.real());
    }
    const double re = law_integral(law, [z](double x) { return (z * x / (1.0 - z * x)).real(); });
    const double im = z.imag() == 0.0 ? 0.0 : law_integral(law, [z](double x) { return (z * x / (1.0 - z * x)).imag(); });
    return {re, im};
}

double s_transform_numeric(const PositiveLaw& law, double z) {
    const double delta = law.mass_at_zero();
    if (!(z > delta - 1.0 && z <= 0.0))
        throw DomainError("S-transform is evaluated on (delta - 1, 0], got z = " + std::to_string(z));
    if (only_s_transform(law)) return law.s_closed(cplx(z)).real();
    if (z == 0.0) return 1.0 / psi_real_deriv(law, 0.0);

    double lo = -1.0, hi = 0.0;
    while (psi_real(law, lo) >= z) {
        lo *= 2.0;
        if (lo < -1e300) throw ConvergenceError("S-transform: could not bracket psi(w) = z");
    }
    double w = std::max(z, 0.5 * lo);
    double f = psi_real(law, w) - z;
    int it = 0;
    for (; it < 200; ++it) {
        if (std::abs(f) <= 1e-16) break;
        if (f > 0.0)
            hi = w;
        else
            lo = w;
        double wn = w - f / psi_real_deriv(law, w);
        if (!(wn > lo && wn < hi)) wn = 0.5 * (lo + hi);
        if (std::abs(wn - w) <= 1e-16 * std::abs(w)) {
            w = wn;
            f = psi_real(law, w) - z;
            break;
        }
        w = wn;
        f = psi_real(law, w) - z;
    }
    if (!(std::abs(f) < 1e-12)) {
        std::ostringstream os;
        os << "S-transform Newton failed at z=" << z << ": w=" << w << " residual=" << f << " bracket=[" << lo
           << ", " << hi << "] iterations=" << it;
        throw ConvergenceError(os.str());
    }
    return w * (z + 1.0) / z;
}

cplx s_transform_rtab(double a, double b, double t, cplx z) {
    if (!(t >= 0.0 && t < t_max(a, b))) throw FlowError("s_transform_rtab needs 0 <= t < t_max");
    if (t == 0.0) return 1.0;
    if (a == b) {
        if (z == cplx(-1.0)) throw DomainError("S-transform pole at z = -1");
        return std::exp(2.0 * b * t / (z + 1.0));
    }
    const cplx den = z + 1.0 + t * (a - b);
    if (den == cplx(0.0)) throw DomainError("S-transform pole at z = -1 - t(a-b)");
    return std::pow((z + 1.0) / den, 2.0 * b / (b - a));
}

double xi_gamma_density(double gamma, double x) {
    if (!(gamma > 0.0)) throw DomainError("xi_gamma needs gamma > 0");
    const double c = xi_edge(gamma);
    if (!(x > 0.0 && x < c)) return 0.0;
    const double num = 4.0 * gamma - (1.0 + gamma) * (1.0 + gamma) * x;
    return std::sqrt(std::max(num, 0.0)) / (2.0 * kPi * (1.0 - x) * std::sqrt(x));
}

double xi_gamma_atom(double gamma) { return std::max(0.0, 1.0 - gamma); }

double xi_gamma_mass(double gamma) {
    if (!(gamma > 0.0)) throw DomainError("xi_gamma needs gamma > 0");
    return xi_integral(gamma, [](double) { return 1.0; }) + xi_gamma_atom(gamma);
}

double hl_quantile_from_s(const PositiveLaw& law, double alpha) {
    if (alpha <= law.mass_at_zero()) return 0.0;
    const double S = law.s_closed ? law.s_closed(cplx(alpha - 1.0)).real() : s_transform_numeric(law, alpha - 1.0);
    return 1.0 / std::sqrt(S);
}

double hl_quantile_from_s(const std::function<double(double)>& S, double alpha, double mass_at_zero) {
    if (alpha <= mass_at_zero) return 0.0;
    return 1.0 / std::sqrt(S(alpha - 1.0));
}

cplx cauchy_transform_xi(double gamma, cplx z) {
    if (!(gamma >= 0.0)) throw DomainError("xi_gamma needs gamma >= 0");
    if (z == cplx(1.0)) throw DomainError("cauchy_transform_xi: z = 1");
    if (gamma > 0.0 && z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= xi_edge(gamma))
        throw DomainError("cauchy_transform_xi: z on the support (branch cut)");
    if (z == cplx(0.0)) throw DomainError("cauchy_transform_xi: z = 0");
    const double g1 = 1.0 + gamma;
    return (1.0 - gamma + std::sqrt(g1 * g1 - 4.0 * gamma / z)) / (2.0 * (z - 1.0));
}

}  // namespace rootflow
