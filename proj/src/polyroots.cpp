#include "rootflow/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "rootflow/errors.hpp"
#include "rootflow/kernels.hpp"

namespace rootflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Upper hull of (j, L_j) over the finite entries.
std::vector<std::size_t> newton_polygon(const std::vector<double>& L) {
    std::vector<std::size_t> hull;
    for (std::size_t j = 0; j < L.size(); ++j) {
        if (!std::isfinite(L[j])) continue;
        while (hull.size() >= 2) {
            const std::size_t i0 = hull[hull.size() - 2], i1 = hull.back();
            // drop i1 if it lies on or below the chord i0 -> j
            const double lhs = (L[i1] - L[i0]) * static_cast<double>(j - i0);
            const double rhs = (L[j] - L[i0]) * static_cast<double>(i1 - i0);
            if (lhs <= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(j);
    }
    return hull;
}

struct Trimmed {
    std::vector<double> log_mag;
    std::vector<cplx> phase;
    std::size_t low = 0;  // origin roots
    std::size_t top = 0;  // true degree
};

Trimmed trim(const LogCoefficients& c) {
    Trimmed t;
    if (c.log_mag.empty()) throw DomainError("empty coefficient vector");
    std::size_t top = c.degree() + 1;
    while (top > 0 && c.is_zero(top - 1)) --top;
    if (top == 0) throw DomainError("zero polynomial has no roots");
    t.top = top - 1;
    while (c.is_zero(t.low)) ++t.low;
    t.log_mag.assign(c.log_mag.begin() + static_cast<long>(t.low), c.log_mag.begin() + static_cast<long>(top));
    t.phase.assign(c.phase.begin() + static_cast<long>(t.low), c.phase.begin() + static_cast<long>(top));
    return t;
}

std::vector<cplx> initial_guess(const std::vector<double>& L) {
    const std::size_t n = L.size() - 1;
    const auto hull = newton_polygon(L);
    std::vector<cplx> z;
    z.reserve(n);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const std::size_t nk = hull[e + 1] - hull[e];
        const double slope = (L[hull[e + 1]] - L[hull[e]]) / static_cast<double>(nk);
        const double r = std::exp(-slope);
        for (std::size_t i = 0; i < nk; ++i) {
            const double th = two_pi * static_cast<double>(i) / static_cast<double>(nk) +
                              two_pi * static_cast<double>(e) / static_cast<double>(n) + 0.7;
            z.push_back(std::polar(r, th));
        }
    }
    return z;
}

}  // namespace

bool RootCloud::all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](unsigned char c) { return c != 0; });
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (trial + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

LogCoefficients sample_polynomial(const ExponentialProfile& p, std::size_t N, const CoefficientLaw& law) {
    if (N < 1) throw DomainError("sample_polynomial needs N >= 1");
    std::mt19937_64 rng(law.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    LogCoefficients c;
    c.log_mag.resize(N + 1);
    c.phase.resize(N + 1);
    const double n = static_cast<double>(N);
    for (std::size_t j = 0; j <= N; ++j) {
        cplx xi;
        switch (law.tag) {
            case CoefficientTag::ComplexGaussian: {
                const double re = normal(rng), im = normal(rng);
                xi = cplx(re, im) / std::sqrt(2.0);
                break;
            }
            case CoefficientTag::RealGaussian:
                xi = normal(rng);
                break;
            case CoefficientTag::Rademacher:
                xi = coin(rng) ? 1.0 : -1.0;
                break;
        }
        const double alpha = static_cast<double>(j) / n;
        const double g = p(alpha);
        const double m = std::abs(xi);
        if (g == -kInf || m == 0.0) {
            c.log_mag[j] = -kInf;
            c.phase[j] = 1.0;
            continue;
        }
        c.log_mag[j] = n * g + std::log(m);
        c.phase[j] = xi / m;
    }
    if (c.is_zero(N)) throw InvalidProfile("sampled leading coefficient vanished");
    return c;
}

std::vector<double> newton_polygon_radii(const LogCoefficients& c) {
    const Trimmed t = trim(c);
    std::vector<double> radii;
    if (t.log_mag.size() < 2) return radii;
    for (const cplx& z : initial_guess(t.log_mag)) radii.push_back(std::abs(z));
    return radii;
}

RootCloud find_roots(const LogCoefficients& c, const RootFinderOptions& opt) {
    const Trimmed t = trim(c);
    RootCloud rc;
    rc.source_degree = t.top;
    rc.origin_roots = t.low;
    const std::size_t n = t.log_mag.size() - 1;

    std::vector<cplx> z, z_next(n);
    std::vector<unsigned char> done(n, 0);
    if (n == 1) {
        // linear factor, solved directly
        z = {-std::exp(t.log_mag[0] - t.log_mag[1]) * t.phase[0] / t.phase[1]};
        done[0] = 1;
    } else if (n > 1) {
        z = initial_guess(t.log_mag);
    }

    kernels::ScaledPoly poly{t.log_mag.data(), t.phase.data(), n};
    std::vector<double> step(n, kInf), resid(n, 1.0);
    const double resid_tol = 4.0 * kEps * static_cast<double>(n + 1);
    std::size_t sweep = 0;
    while (n > 1 && sweep < opt.max_sweeps && std::find(done.begin(), done.end(), 0) != done.end()) {
        if (opt.serial)
            kernels::aberth_sweep_serial(poly, z.data(), done.data(), z_next.data(), step.data(), resid.data(), n);
        else
            kernels::aberth_sweep_omp(poly, z.data(), done.data(), z_next.data(), step.data(), resid.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            if (step[i] < opt.step_tol * (1.0 + std::abs(z_next[i])) || resid[i] < resid_tol) done[i] = 1;
        }
        z.swap(z_next);
        ++sweep;
    }
    rc.sweeps = sweep;
    rc.roots = std::move(z);
    rc.converged = std::move(done);
    rc.roots.insert(rc.roots.end(), t.low, cplx(0.0));
    rc.converged.insert(rc.converged.end(), t.low, 1);
    return rc;
}

double relative_residual(const LogCoefficients& c, cplx z) {
    const std::size_t n = c.degree();
    const double rho = std::abs(z);
    if (rho == 0.0) return c.is_zero(0) ? 0.0 : 1.0;
    const double lr = std::log(rho);
    double s = -kInf;
    for (std::size_t j = 0; j <= n; ++j)
        if (!c.is_zero(j)) s = std::max(s, c.log_mag[j] + static_cast<double>(j) * lr);
    const cplx w = z / rho;
    cplx A = 0.0;
    double mag = 0.0;
    for (std::size_t jj = n + 1; jj-- > 0;) {
        const double e = c.is_zero(jj) ? 0.0 : std::exp(c.log_mag[jj] + static_cast<double>(jj) * lr - s);
        A = A * w + e * c.phase[jj];
        mag += e;
    }
    return std::abs(A) / mag;
}

double EmpiricalCdf::operator()(double r) const {
    const auto k = std::upper_bound(radii.begin(), radii.end(), r) - radii.begin();
    return static_cast<double>(k) / static_cast<double>(radii.size());
}

double EmpiricalCdf::left(double r) const {
    const auto k = std::lower_bound(radii.begin(), radii.end(), r) - radii.begin();
    return static_cast<double>(k) / static_cast<double>(radii.size());
}

EmpiricalCdf empirical_radial_cdf(const RootCloud& rc) {
    if (rc.roots.empty()) throw DomainError("empirical cdf of an empty root cloud");
    EmpiricalCdf e;
    e.radii.reserve(rc.roots.size());
    for (const cplx& z : rc.roots) e.radii.push_back(std::abs(z));
    std::sort(e.radii.begin(), e.radii.end());
    return e;
}

double ks_distance(const EmpiricalCdf& emp, const RadialMeasure& theory) {
    double worst = 0.0;
    for (double r : emp.radii) {
        worst = std::max(worst, std::abs(emp(r) - cdf(theory, r)));
        worst = std::max(worst, std::abs(emp.left(r) - cdf_left(theory, r)));
    }
    for (double r : theory.quantile) {
        worst = std::max(worst, std::abs(emp(r) - cdf(theory, r)));
        worst = std::max(worst, std::abs(emp.left(r) - cdf_left(theory, r)));
    }
    return worst;
}

double angular_uniformity(const RootCloud& rc, int k) {
    if (k < 1) throw DomainError("angular_uniformity needs k >= 1");
    cplx acc = 0.0;
    std::size_t n = 0;
    for (const cplx& z : rc.roots) {
        if (z == cplx(0.0)) continue;
        acc += std::pow(z / std::abs(z), k);
        ++n;
    }
    return n == 0 ? 0.0 : std::abs(acc) / static_cast<double>(n);
}

}  // namespace rootflow
