#include "rootflow/potential.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rootflow/errors.hpp"
#include "rootflow/radial.hpp"

namespace rootflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double golden_max(const std::function<double(double)>& F, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = F(x1), f2 = F(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = F(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = F(x1);
        }
    }
    const double mid = 0.5 * (lo + hi);
    // the maximum may sit on an endpoint
    double best = mid, fb = F(mid);
    for (double e : {lo, hi})
        if (F(e) > fb) {
            fb = F(e);
            best = e;
        }
    return best;
}

}  // namespace

PotentialField::PotentialField(ExponentialProfile profile, double a_, double b_)
    : g0(std::move(profile)), a(a_), b(b_) {
    if (g0.alpha_min != 0.0) throw InvalidProfile("potential field needs alpha_min = 0");
    if (a == b && b <= 0.0) throw FlowError("a = b requires b > 0");
}

double PotentialField::alpha_min(double t) const { return a < b ? t * (b - a) : 0.0; }

double PotentialField::gt(double alpha, double t) const {
    if (alpha < alpha_min(t)) return -kInf;
    const double base = g0(alpha);
    if (t == 0.0) return base;
    if (a == b) return base + b * t * std::log(alpha);
    const double sh = t * (a - b);
    return base + b / (a - b) * (xlogx(alpha + sh) - xlogx(alpha)) - b * t;
}

double PotentialField::dgt(double alpha, double t) const {
    const double base = left_derivative(g0, alpha);
    if (t == 0.0) return base;
    if (a == b) return base + b * t / alpha;
    return base + b / (a - b) * (std::log(alpha + t * (a - b)) - std::log(alpha));
}

double PotentialField::alpha_star(double r, double t) const {
    if (!(t >= 0.0 && t < t_max(a, b))) throw FlowError("potential needs 0 <= t < t_max");
    const double L = 2.0 * std::log(r);
    double lo = alpha_min(t), hi = 1.0;
    if (r == 0.0) return lo;
    if (g0.dg) {
        auto dF = [&](double al) { return 2.0 * dgt(al, t) + L; };
        if (dF(1.0) >= 0.0) return 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= alpha_min(t)) break;
            if (dF(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    return golden_max([&](double al) { return 2.0 * gt(al, t) + al * L; }, lo, hi);
}

double PotentialField::r_out(double t) const { return std::exp(-dgt(1.0, t)); }

double rescaled_potential_S(const PotentialField& f, cplx z, double t) {
    const double r = std::abs(z);
    if (r == 0.0) throw DomainError("S_t is not defined at z = 0");
    const double L = 2.0 * std::log(r);
    const double al = f.alpha_star(r, t);
    return 2.0 * f.gt(al, t) + al * L + t * (f.a - f.b) * L;
}

double log_potential_W(const PotentialField& f, cplx z, double t) {
    const double r = std::abs(z);
    if (r == 0.0) {
        if (f.alpha_min(t) > 0.0) return -kInf;
        return 2.0 * f.gt(0.0, t) - 2.0 * f.gt(1.0, t);
    }
    const double L = 2.0 * std::log(r);
    const double al = f.alpha_star(r, t);
    return 2.0 * f.gt(al, t) - 2.0 * f.gt(1.0, t) + al * L;
}

double log_potential_V(const PotentialField& f, cplx z, double t) {
    const double s = t * (f.a - f.b);
    return (rescaled_potential_S(f, z, t) - 2.0 * f.gt(1.0, t)) / (1.0 + s);
}

cplx ds_dz(const PotentialField& f, cplx z, double t, double h) {
    const double sx = (rescaled_potential_S(f, z + h, t) - rescaled_potential_S(f, z - h, t)) / (2.0 * h);
    const double sy =
        (rescaled_potential_S(f, z + cplx(0.0, h), t) - rescaled_potential_S(f, z - cplx(0.0, h), t)) / (2.0 * h);
    return 0.5 * cplx(sx, -sy);
}

cplx ds_dz_analytic(const PotentialField& f, cplx z, double t) {
    if (z == cplx(0.0)) throw DomainError("dS/dz is not defined at z = 0");
    return (f.alpha_star(std::abs(z), t) + t * (f.a - f.b)) / z;
}

double pde_residual(const PotentialField& f, cplx z, double t, double h) {
    const double r = std::abs(z);
    if (r <= 10.0 * h) throw DomainError("pde_residual: stencil too close to the origin");
    if (std::abs(r - f.r_out(t)) <= 10.0 * h) throw DomainError("pde_residual: stencil crosses the support boundary");
    if (t < h) throw DomainError("pde_residual: t must be at least h for the time difference");
    const double st = (rescaled_potential_S(f, z, t + h) - rescaled_potential_S(f, z, t - h)) / (2.0 * h);
    const cplx p = ds_dz(f, z, t, h);
    const double rhs = 2.0 * f.a * std::log(r) + 2.0 * f.b * std::log(std::abs(p));
    return std::abs(st - rhs);
}

cplx cauchy_transform(const RadialMeasure& mu, cplx z) {
    if (z == cplx(0.0)) {
        if (mu.atom0_mass > 0.0) throw DomainError("Cauchy transform diverges at 0 for an origin atom");
        return 0.0;
    }
    return cdf(mu, std::abs(z)) / z;
}

cplx characteristic_curve(cplx z0, cplx p0, double a, double b, double t) {
    const cplx zp = z0 * p0;
    if (zp == cplx(0.0)) throw DomainError("characteristic curve needs z0 p0 != 0");
    if (t == 0.0) return z0;
    if (a == b) return z0 * std::exp(-b * t / zp);
    return z0 * std::pow(1.0 + t * (a - b) / zp, b / (b - a));
}

CharacteristicState characteristic_state(cplx z0, cplx p0, double a, double b, double t) {
    const cplx z = characteristic_curve(z0, p0, a, b, t);
    return {z, (z0 * p0 + t * (a - b)) / z, t};
}

double curve_transport_consistency(const RadialMeasure& mu0, double a, double b, double t, cplx w) {
    const double a0 = cdf(mu0, std::abs(w));
    if (!(a0 > std::max(0.0, t * (b - a))))
        throw DomainError("curve_transport_consistency needs alpha_0(|w|) > max(0, t(b-a))");
    const cplx zc = characteristic_curve(w, cauchy_transform(mu0, w), a, b, t);
    const cplx zt = transport_point(TransportMap{a, b, t, mu0}, w);
    return std::abs(zc - zt);
}

}  // namespace rootflow
