#include <omp.h>

#include <cmath>
#include <limits>

#include "rootflow/kernels.hpp"

namespace rootflow::kernels {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool nonpositive_integer(double x) { return x <= 0.0 && std::abs(x - std::round(x)) < 1e-9; }

void flow_factor_one(const FlowFactorArgs& args, std::size_t j, double* log_factor, double* sign) {
    if (j < args.j_first) {
        log_factor[j] = kNegInf;
        sign[j] = 1.0;
        return;
    }
    double acc = 0.0, sg = 1.0;
    const double d = args.a - args.b;
    for (std::size_t m = 0; m < args.steps; ++m) {
        const double e = static_cast<double>(j) + static_cast<double>(m) * d;
        const double den = e + 1.0 - args.b;
        if (nonpositive_integer(den) || e + d < -1e-9) {
            acc = kNegInf;
            break;
        }
        int s_num = 1, s_den = 1;
        const double ln = lgamma_r(e + 1.0, &s_num);
        const double ld = lgamma_r(den, &s_den);
        acc += ln - ld;
        if (s_num * s_den < 0) sg = -sg;
    }
    log_factor[j] = acc;
    sign[j] = sg;
}

// p/p' at z with the coefficients rescaled by the dominant term of |c_j z^j|,
// so nothing overflows however large the spread of log_mag.
cplx newton_ratio(const ScaledPoly& p, cplx z, double* resid) {
    const std::size_t n = p.degree;
    const double rho = std::abs(z);
    if (rho == 0.0) {
        *resid = 1.0;
        const cplx c0 = std::exp(p.log_mag[0]) * p.phase[0];
        const cplx c1 = std::isfinite(p.log_mag[1]) ? std::exp(p.log_mag[1]) * p.phase[1] : cplx(0.0);
        return c0 / c1;
    }
    const double lr = std::log(rho);
    double s = kNegInf;
    for (std::size_t j = 0; j <= n; ++j)
        if (std::isfinite(p.log_mag[j])) s = std::max(s, p.log_mag[j] + static_cast<double>(j) * lr);
    const cplx w = z / rho;
    cplx A = 0.0, B = 0.0;
    double mag = 0.0;
    for (std::size_t jj = n + 1; jj-- > 0;) {
        const double L = p.log_mag[jj];
        const double e = std::isfinite(L) ? std::exp(L + static_cast<double>(jj) * lr - s) : 0.0;
        const cplx c = e * p.phase[jj];
        A = A * w + c;
        B = B * w + static_cast<double>(jj) * c;
        mag += e;
    }
    *resid = std::abs(A) / mag;
    return z * A / B;
}

void aberth_one(const ScaledPoly& p, const cplx* z, const unsigned char* done, cplx* z_next, double* step,
                double* resid, std::size_t n, std::size_t i) {
    if (done[i]) {
        z_next[i] = z[i];
        step[i] = 0.0;
        return;
    }
    const cplx zi = z[i];
    const cplx ratio = newton_ratio(p, zi, &resid[i]);
    cplx S = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        const cplx d = zi - z[k];
        if (d != cplx(0.0)) S += 1.0 / d;
    }
    const cplx delta = ratio / (1.0 - ratio * S);
    if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) {
        // p'(z) vanished or two iterates coincide; nudge off the degenerate point
        z_next[i] = zi + cplx(0.0, 1e-8 * (1.0 + std::abs(zi)));
        step[i] = std::numeric_limits<double>::infinity();
        return;
    }
    z_next[i] = zi - delta;
    step[i] = std::abs(delta);
}

}  // namespace

void flow_factors_omp(const FlowFactorArgs& args, double* log_factor, double* sign) {
    const auto n = static_cast<long long>(args.N);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long j = 0; j <= n; ++j) flow_factor_one(args, static_cast<std::size_t>(j), log_factor, sign);
}

void aberth_sweep_omp(const ScaledPoly& p, const cplx* z, const unsigned char* done, cplx* z_next,
                      double* step, double* resid, std::size_t n) {
    const auto nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) aberth_one(p, z, done, z_next, step, resid, n, static_cast<std::size_t>(i));
}

}  // namespace rootflow::kernels
