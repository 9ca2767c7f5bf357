#include "rootflow/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConcaveTol = 1e-9;
constexpr double kFlatSlopeTol = 1e-12;
constexpr double kFlatRunTol = 1e-12;

void set_concavity_flags(ExponentialProfile& p) {
    const auto& v = p.grid;
    double worst = -kInf;
    bool strict = true;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!std::isfinite(v[i - 1]) || !std::isfinite(v[i]) || !std::isfinite(v[i + 1])) continue;
        const double d2 = v[i + 1] - 2.0 * v[i] + v[i - 1];
        worst = std::max(worst, d2);
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(v[i - 1]) + std::abs(v[i]) + std::abs(v[i + 1]) + 1e-3);
        if (!(d2 < -noise)) strict = false;
    }
    p.concave = worst <= kConcaveTol;
    p.strictly_concave = p.concave && strict;
}

// Upper hull indices over the finite samples, nearly collinear points merged.
std::vector<std::size_t> upper_hull(const ExponentialProfile& p) {
    std::vector<std::size_t> hull;
    const auto& v = p.grid;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) continue;
        while (hull.size() >= 2) {
            const std::size_t i0 = hull[hull.size() - 2], i1 = hull.back();
            const double s01 = (v[i1] - v[i0]) / (p.alpha_at(i1) - p.alpha_at(i0));
            const double s1i = (v[i] - v[i1]) / (p.alpha_at(i) - p.alpha_at(i1));
            if (s1i >= s01 - kFlatSlopeTol * (1.0 + std::abs(s01)))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    return hull;
}

}  // namespace

double ExponentialProfile::alpha_at(std::size_t i) const {
    if (i + 1 == grid.size()) return 1.0;
    return alpha_min + static_cast<double>(i) * step();
}

double ExponentialProfile::operator()(double alpha) const {
    if (alpha < alpha_min) return -kInf;
    if (g) return g(alpha);
    const double x = (std::min(alpha, 1.0) - alpha_min) / step();
    const auto i = std::min(static_cast<std::size_t>(x), grid.size() - 1);
    const double w = x - static_cast<double>(i);
    if (w == 0.0 || i + 1 == grid.size()) return grid[i];
    return (1.0 - w) * grid[i] + w * grid[i + 1];
}

ExponentialProfile make_profile(double alpha_min, std::function<double(double)> g,
                                std::function<double(double)> dg, ProfileFamily family,
                                std::size_t grid_size) {
    if (!(alpha_min >= 0.0 && alpha_min < 1.0))
        throw DomainError("alpha_min must lie in [0,1), got " + std::to_string(alpha_min));
    if (grid_size < 3) throw DomainError("profile grid needs at least 3 points");
    ExponentialProfile p;
    p.family = family;
    p.alpha_min = alpha_min;
    p.g = std::move(g);
    p.dg = std::move(dg);
    p.grid.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) p.grid[i] = p.g(p.alpha_at(i));
    set_concavity_flags(p);
    return p;
}

ExponentialProfile profile_from_grid(double alpha_min, std::vector<double> values) {
    if (!(alpha_min >= 0.0 && alpha_min < 1.0))
        throw DomainError("alpha_min must lie in [0,1), got " + std::to_string(alpha_min));
    if (values.size() < 3) throw DomainError("profile grid needs at least 3 points");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw InvalidProfile("profile values must be finite above alpha_min (index " +
                                 std::to_string(i) + ")");
    ExponentialProfile p;
    p.alpha_min = alpha_min;
    p.grid = std::move(values);
    set_concavity_flags(p);
    return p;
}

ExponentialProfile lo_profile(double beta, std::size_t grid_size) {
    if (!(beta >= 0.0)) throw DomainError("Littlewood-Offord parameter must be >= 0");
    auto g = [beta](double a) { return a > 0.0 ? -beta * (a * std::log(a) - a) : 0.0; };
    auto dg = [beta](double a) {
        if (beta == 0.0) return 0.0;
        return a > 0.0 ? -beta * std::log(a) : kInf;
    };
    auto p = make_profile(0.0, g, dg, ProfileFamily::LittlewoodOfford, grid_size);
    p.beta = beta;
    return p;
}

double left_derivative(const ExponentialProfile& p, double alpha) {
    if (!(alpha > p.alpha_min) || alpha > 1.0)
        throw DomainError("left derivative needs alpha in (alpha_min, 1], got " + std::to_string(alpha));
    if (p.dg) return p.dg(alpha);
    const double lo = std::max(p.alpha_min, alpha - p.step());
    const double hi_val = p(alpha), lo_val = p(lo);
    if (lo_val == -kInf) return kInf;
    return (hi_val - lo_val) / (alpha - lo);
}

ExponentialProfile concave_majorant(const ExponentialProfile& p) {
    const auto hull = upper_hull(p);
    if (hull.empty()) throw InvalidProfile("profile has no finite samples");
    std::vector<HullSegment> segs;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const std::size_t i0 = hull[e], i1 = hull[e + 1];
        if (i1 - i0 < 2) continue;
        const double a0 = p.alpha_at(i0), a1 = p.alpha_at(i1);
        segs.push_back({a0, a1, (p.grid[i1] - p.grid[i0]) / (a1 - a0)});
    }
    if (p.concave) {
        ExponentialProfile out = p;
        out.flat_segments = std::move(segs);
        return out;
    }
    std::vector<double> v(p.grid.size(), -kInf);
    for (std::size_t e = 0; e < hull.size(); ++e) {
        const std::size_t i0 = hull[e];
        v[i0] = p.grid[i0];
        if (e + 1 == hull.size()) break;
        const std::size_t i1 = hull[e + 1];
        const double a0 = p.alpha_at(i0), a1 = p.alpha_at(i1);
        const double s = (p.grid[i1] - p.grid[i0]) / (a1 - a0);
        for (std::size_t i = i0 + 1; i < i1; ++i) v[i] = p.grid[i0] + s * (p.alpha_at(i) - a0);
    }
    ExponentialProfile out;
    out.family = ProfileFamily::Grid;
    out.alpha_min = p.alpha_min;
    out.grid = std::move(v);
    set_concavity_flags(out);
    out.concave = true;
    out.flat_segments = std::move(segs);
    if (!out.flat_segments.empty()) out.strictly_concave = false;
    return out;
}

double RadialMeasure::quantile_at(double alpha) const {
    if (alpha <= 0.0) return 0.0;
    if (exact) return exact(std::min(alpha, 1.0));
    if (alpha >= 1.0) return quantile.back();
    const double x = alpha * static_cast<double>(quantile.size() - 1);
    const auto k = static_cast<std::size_t>(std::ceil(x));
    const double w = x - static_cast<double>(k - 1);
    return (1.0 - w) * quantile[k - 1] + w * quantile[k];
}

void detect_atoms(RadialMeasure& m, double analytic_atom0) {
    const auto& v = m.quantile;
    const std::size_t M = v.size();
    m.circle_atoms.clear();
    m.warnings &= ~kWarnNonMonotone;
    for (std::size_t k = 1; k < M; ++k)
        if (v[k] < v[k - 1] - kFlatRunTol * std::abs(v[k - 1])) m.warnings |= kWarnNonMonotone;

    if (analytic_atom0 >= 0.0) {
        m.atom0_mass = analytic_atom0;
    } else {
        std::size_t last_zero = 0;
        if (v[0] == 0.0)
            while (last_zero + 1 < M && v[last_zero + 1] == 0.0) ++last_zero;
        m.atom0_mass = m.alpha_at(last_zero);
    }

    std::size_t p = 0;
    while (p < M) {
        std::size_t q = p;
        while (q + 1 < M && std::abs(v[q + 1] - v[p]) <= kFlatRunTol * std::abs(v[p])) ++q;
        if (v[p] > 0.0 && q - p >= 2) {
            const double lo = p == 0 ? 0.0 : m.alpha_at(p - 1);
            m.circle_atoms.push_back({v[p], m.alpha_at(q) - lo});
        }
        p = q + 1;
    }
}

RadialMeasure measure_from_grid(std::vector<double> quantile) {
    if (quantile.size() < 3) throw DomainError("measure grid needs at least 3 points");
    RadialMeasure m;
    m.quantile = std::move(quantile);
    detect_atoms(m);
    return m;
}

RadialMeasure measure_from_quantile(const std::function<double(double)>& q, std::size_t grid_size,
                                    bool keep_exact) {
    if (grid_size < 3) throw DomainError("measure grid needs at least 3 points");
    RadialMeasure m;
    m.quantile.resize(grid_size);
    for (std::size_t k = 1; k < grid_size; ++k) m.quantile[k] = q(m.alpha_at(k));
    m.quantile[0] = q(1e-9 * m.alpha_at(1));
    detect_atoms(m);
    if (keep_exact) m.exact = q;
    return m;
}

RadialMeasure kz_measure(const ExponentialProfile& p0) {
    const ExponentialProfile p = concave_majorant(p0);
    const double d1 = left_derivative(p, 1.0);
    if (std::isnan(d1) || d1 == -kInf)
        throw InvalidProfile("g'(1) = -inf: the limiting measure has unbounded support");

    auto q = [p](double a) -> double {
        if (a <= p.alpha_min) return 0.0;
        for (const auto& s : p.flat_segments)
            if (a > s.alpha_begin && a <= s.alpha_end) return std::exp(-s.slope);
        return std::exp(-left_derivative(p, std::min(a, 1.0)));
    };

    const std::size_t M = p.grid_size();
    RadialMeasure m;
    m.quantile.resize(M);
    for (std::size_t k = 1; k < M; ++k) m.quantile[k] = q(m.alpha_at(k));
    m.quantile[0] = p.alpha_min > 0.0 ? 0.0 : q(1e-9 * p.step());
    detect_atoms(m, p.alpha_min);
    // hull segments give the atoms exactly; grid detection only approximates them
    m.circle_atoms.clear();
    for (const auto& s : p.flat_segments)
        m.circle_atoms.push_back({std::exp(-s.slope), s.alpha_end - s.alpha_begin});
    if (p.closed_form()) m.exact = q;
    if (!p.strictly_concave) m.warnings |= kWarnNonStrictSource;
    return m;
}

RadialMeasure uniform_disk(double radius, std::size_t grid_size) {
    return measure_from_quantile([radius](double a) { return radius * std::sqrt(a); }, grid_size);
}

RadialMeasure uniform_circle(double radius, std::size_t grid_size) {
    return measure_from_quantile([radius](double) { return radius; }, grid_size);
}

double cdf(const RadialMeasure& m, double r) {
    const auto& v = m.quantile;
    if (r >= v.back()) return 1.0;
    if (r < v.front()) return 0.0;
    const auto k = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), r) - v.begin()) - 1;
    double lo = m.alpha_at(k), hi = m.alpha_at(k + 1);
    if (m.exact) {
        for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (m.exact(mid) <= r)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }
    // a flat run starting at k+1 is a circle atom whose jump sits right after alpha_k
    if (k + 2 < v.size() && v[k + 2] == v[k + 1]) return lo;
    return lo + (hi - lo) * (r - v[k]) / (v[k + 1] - v[k]);
}

double cdf_left(const RadialMeasure& m, double r) {
    const auto& v = m.quantile;
    if (r > v.back()) return 1.0;
    if (r <= v.front()) return 0.0;
    const auto k1 = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), r) - v.begin());
    double lo = m.alpha_at(k1 - 1), hi = m.alpha_at(k1);
    if (m.exact) {
        for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (m.exact(mid) < r)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }
    if (k1 + 1 < v.size() && v[k1 + 1] == v[k1]) return lo;
    return lo + (hi - lo) * (r - v[k1 - 1]) / (v[k1] - v[k1 - 1]);
}

double continuous_mass(const RadialMeasure& m) {
    const auto& v = m.quantile;
    const std::size_t M = v.size();
    std::vector<char> in_atom(M, 0);
    for (std::size_t k = 0; k < M; ++k)
        if (m.alpha_at(k) <= m.atom0_mass + 1e-15) in_atom[k] = 1;
    for (const auto& a : m.circle_atoms)
        for (std::size_t k = 1; k < M; ++k)
            if (v[k] == a.radius) in_atom[k] = 1;
    double mass = 0.0;
    for (std::size_t k = 1; k < M; ++k)
        if (!in_atom[k]) mass += m.alpha_at(k) - m.alpha_at(k - 1);
    return mass;
}

}  // namespace rootflow
