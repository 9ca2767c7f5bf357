// Serial reference kernels. Straight loops, no scheduling; the test suite
// checks the OpenMP kernels against these.
#include <cmath>
#include <limits>

#include "rootflow/kernels.hpp"

namespace rootflow::kernels {

void flow_factors_serial(const FlowFactorArgs& args, double* log_factor, double* sign) {
    const double d = args.a - args.b;
    for (std::size_t j = 0; j <= args.N; ++j) {
        log_factor[j] = -std::numeric_limits<double>::infinity();
        sign[j] = 1.0;
        if (j < args.j_first) continue;
        double acc = 0.0, sg = 1.0;
        bool dead = false;
        for (std::size_t m = 0; m < args.steps && !dead; ++m) {
            const double e = static_cast<double>(j) + static_cast<double>(m) * d;
            const double den = e + 1.0 - args.b;
            if ((den <= 0.0 && std::abs(den - std::round(den)) < 1e-9) || e + d < -1e-9) {
                dead = true;
                break;
            }
            int s1 = 1, s2 = 1;
            acc += lgamma_r(e + 1.0, &s1) - lgamma_r(den, &s2);
            if (s1 * s2 < 0) sg = -sg;
        }
        if (!dead) {
            log_factor[j] = acc;
            sign[j] = sg;
        }
    }
}

void aberth_sweep_serial(const ScaledPoly& p, const cplx* z, const unsigned char* done, cplx* z_next,
                         double* step, double* resid, std::size_t n) {
    const std::size_t deg = p.degree;
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) {
            z_next[i] = z[i];
            step[i] = 0.0;
            continue;
        }
        const cplx zi = z[i];
        cplx ratio;
        const double rho = std::abs(zi);
        if (rho == 0.0) {
            resid[i] = 1.0;
            const cplx c1 = std::isfinite(p.log_mag[1]) ? std::exp(p.log_mag[1]) * p.phase[1] : cplx(0.0);
            ratio = std::exp(p.log_mag[0]) * p.phase[0] / c1;
        } else {
            const double lr = std::log(rho);
            double s = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j <= deg; ++j)
                if (std::isfinite(p.log_mag[j])) s = std::max(s, p.log_mag[j] + static_cast<double>(j) * lr);
            const cplx w = zi / rho;
            cplx A = 0.0, B = 0.0;
            double mag = 0.0;
            for (std::size_t jj = deg + 1; jj-- > 0;) {
                const double L = p.log_mag[jj];
                const double e = std::isfinite(L) ? std::exp(L + static_cast<double>(jj) * lr - s) : 0.0;
                const cplx c = e * p.phase[jj];
                A = A * w + c;
                B = B * w + static_cast<double>(jj) * c;
                mag += e;
            }
            resid[i] = std::abs(A) / mag;
            ratio = zi * A / B;
        }
        cplx S = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const cplx d = zi - z[k];
            if (d != cplx(0.0)) S += 1.0 / d;
        }
        const cplx delta = ratio / (1.0 - ratio * S);
        if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) {
            z_next[i] = zi + cplx(0.0, 1e-8 * (1.0 + std::abs(zi)));
            step[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        z_next[i] = zi - delta;
        step[i] = std::abs(delta);
    }
}

}  // namespace rootflow::kernels
