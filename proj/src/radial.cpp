#include "rootflow/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using QFun = std::function<double(double)>;

// Samples q on an M-point grid (q(0+) taken just right of 0) and keeps q as the
// exact quantile when `exact` is set.
RadialMeasure sample(const QFun& q, std::size_t M, bool exact, double atom0, unsigned warnings) {
    RadialMeasure m = measure_from_quantile(q, M, exact);
    detect_atoms(m, atom0);
    m.warnings |= warnings;
    return m;
}

// q evaluated through the exact quantile when present, grid interpolation otherwise.
QFun quantile_fn(const RadialMeasure& m) {
    if (m.exact) return m.exact;
    return [m](double a) { return m.quantile_at(a); };
}

void check_time(double a, double b, double t) {
    if (!(t >= 0.0)) throw FlowError("flow time must be >= 0");
    if (!(t < t_max(a, b))) throw FlowError("t = " + std::to_string(t) + " is not below t_max");
}

}  // namespace

double transport_quantile(double a, double b, double t, double alpha) {
    if (t == 0.0) return 1.0;
    if (a == b) return alpha > 0.0 ? std::exp(-b * t / alpha) : (b > 0.0 ? 0.0 : kInf);
    const double sh = t * (a - b);
    const double ex = b / (b - a);
    if (a < b && alpha <= -sh) return 0.0;
    if (alpha <= 0.0) return ex < 0.0 ? 0.0 : kInf;
    return std::pow((alpha + sh) / alpha, ex);
}

RadialMeasure transport_measure(double a, double b, double t, std::size_t grid_size) {
    check_time(a, b, t);
    const double atom0 = a < b ? t * (b - a) : 0.0;
    return sample([a, b, t](double al) { return transport_quantile(a, b, t, al); }, grid_size, true, atom0, 0);
}

cplx transport_point(const TransportMap& T, cplx w) {
    check_time(T.a, T.b, T.t);
    if (T.t == 0.0) return w;
    if (w == cplx(0.0)) return 0.0;
    const double a0 = cdf(T.source, std::abs(w));
    if (T.a < T.b && a0 <= T.t * (T.b - T.a)) return 0.0;
    if (a0 <= 0.0) throw DomainError("transport map is singular where alpha_0(|w|) = 0");
    if (T.a == T.b) return w * std::exp(-T.b * T.t / a0);
    return w * std::pow((a0 + T.t * (T.a - T.b)) / a0, T.b / (T.b - T.a));
}

RadialMeasure pushforward_sigma(const RadialMeasure& mu0, double a, double b, double t) {
    check_time(a, b, t);
    if (t == 0.0) return mu0;
    const std::size_t M = mu0.grid_size();
    RadialMeasure m;
    m.quantile.resize(M);
    for (std::size_t k = 1; k < M; ++k)
        m.quantile[k] = mu0.quantile[k] * transport_quantile(a, b, t, m.alpha_at(k));
    m.quantile[0] = mu0.quantile[0] * transport_quantile(a, b, t, 1e-9 * m.alpha_at(1));
    const double atom0 = a < b ? std::max(mu0.atom0_mass, t * (b - a)) : mu0.atom0_mass;
    m.warnings = mu0.warnings & kWarnNonStrictSource;
    detect_atoms(m, atom0);
    if (mu0.exact)
        m.exact = [q0 = mu0.exact, a, b, t](double al) { return q0(al) * transport_quantile(a, b, t, al); };
    return m;
}

RadialMeasure pushforward_mu(const RadialMeasure& mu0, double a, double b, double t) {
    check_time(a, b, t);
    if (t == 0.0) return mu0;
    const double s = t * (a - b);
    // beta -> alpha = beta (1 + s) - s removes (a < b) or adds (a > b) origin mass
    auto q = [q0 = quantile_fn(mu0), a, b, t, s](double beta) {
        const double al = beta * (1.0 + s) - s;
        if (al <= 0.0) return 0.0;
        return q0(std::min(al, 1.0)) * transport_quantile(a, b, t, std::min(al, 1.0));
    };
    const double atom0 = a < b ? (std::max(mu0.atom0_mass, -s) + s) / (1.0 + s) : (mu0.atom0_mass + s) / (1.0 + s);
    return sample(q, mu0.grid_size(), static_cast<bool>(mu0.exact), std::max(0.0, atom0),
                  mu0.warnings & kWarnNonStrictSource);
}

RadialMeasure radial_mult_convolve(const RadialMeasure& m1, const RadialMeasure& m2) {
    const std::size_t M = std::max(m1.grid_size(), m2.grid_size());
    const QFun q1 = quantile_fn(m1), q2 = quantile_fn(m2);
    RadialMeasure m;
    m.quantile.resize(M);
    for (std::size_t k = 1; k < M; ++k) {
        const double al = m.alpha_at(k);
        m.quantile[k] = q1(al) * q2(al);
    }
    m.quantile[0] = m1.quantile[0] * m2.quantile[0];
    m.warnings = (m1.warnings | m2.warnings) & kWarnNonStrictSource;
    detect_atoms(m, std::max(m1.atom0_mass, m2.atom0_mass));
    if (m1.exact && m2.exact) m.exact = [q1, q2](double al) { return q1(al) * q2(al); };
    return m;
}

RadialMeasure fractional_free_selfconv(const RadialMeasure& mu, double k, bool hat) {
    if (!(k >= 1.0)) throw DomainError("fractional free convolution needs k >= 1");
    if (mu.atom0_mass > 0.0) throw PreconditionError("measure has an atom at the origin");
    if (!mu.circle_atoms.empty()) throw PreconditionError("measure has circle atoms (discontinuous cdf)");
    if (k == 1.0) return mu;
    const double t = 1.0 - 1.0 / k;
    const double scale = hat ? 1.0 : k;
    auto q = [q0 = quantile_fn(mu), t, scale](double al) {
        if (al <= 0.0) return 0.0;
        const double beta = t + al * (1.0 - t);
        return scale * q0(beta) * std::sqrt((beta - t) / beta);
    };
    return sample(q, mu.grid_size(), static_cast<bool>(mu.exact), 0.0, mu.warnings & kWarnNonStrictSource);
}

RadialMeasure dilate(const RadialMeasure& mu, double c) {
    if (!(c > 0.0)) throw DomainError("dilation factor must be positive");
    RadialMeasure m = mu;
    for (auto& v : m.quantile) v *= c;
    for (auto& a : m.circle_atoms) a.radius *= c;
    if (mu.exact) m.exact = [q0 = mu.exact, c](double al) { return c * q0(al); };
    return m;
}

RadialMeasure mix_origin(const RadialMeasure& mu, double s) {
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("origin mass must lie in [0,1)");
    if (s == 0.0) return mu;
    auto q = [q0 = quantile_fn(mu), s](double al) {
        if (al <= s) return 0.0;
        return q0(std::min((al - s) / (1.0 - s), 1.0));
    };
    return sample(q, mu.grid_size(), static_cast<bool>(mu.exact), s + (1.0 - s) * mu.atom0_mass, mu.warnings);
}

double oplus_otimes_relation_check(const RadialMeasure& mu0, double t) {
    if (!(t >= 0.0 && t < 1.0)) throw DomainError("relation check needs t in [0,1)");
    if (t == 0.0) return 0.0;
    const RadialMeasure rho_hat = dilate(transport_measure(-1.0, 1.0, 0.5 * t, mu0.grid_size()), 1.0 / (1.0 - t));
    const RadialMeasure lhs = radial_mult_convolve(mu0, rho_hat);
    const RadialMeasure rhs = mix_origin(fractional_free_selfconv(mu0, 1.0 / (1.0 - t), false), t);
    double worst = 0.0;
    for (std::size_t k = 1; k < lhs.grid_size(); ++k)
        worst = std::max(worst, std::abs(lhs.quantile[k] - rhs.quantile_at(lhs.alpha_at(k))));
    return worst;
}

cplx kac_randomized_transport(cplx w, double u, double a, double b, double t) {
    check_time(a, b, t);
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("label must lie in (0,1]");
    return w * transport_quantile(a, b, t, u);
}

}  // namespace rootflow
