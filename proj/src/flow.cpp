#include "rootflow/flow.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rootflow/errors.hpp"
#include "rootflow/kernels.hpp"

namespace rootflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLatticeTol = 1e-9;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Snap values that are integers up to rounding (N t (b-a) = 40 - 1e-14, etc).
double snap(double x) {
    const double r = std::round(x);
    return std::abs(x - r) < kLatticeTol ? r : x;
}

void require_profile_flow(const ExponentialProfile& g0, const FlowParams& fp) {
    validate(fp);
    if (fp.a == fp.b && fp.b <= 0.0)
        throw FlowError("a = b requires b > 0 for the profile-level flow");
    if (g0.alpha_min != 0.0) throw InvalidProfile("the profile flow needs alpha_min = 0");
}

}  // namespace

bool LogCoefficients::is_zero(std::size_t j) const { return log_mag[j] == -kInf; }

cplx LogCoefficients::coefficient(std::size_t j) const {
    return is_zero(j) ? cplx(0.0) : std::exp(log_mag[j]) * phase[j];
}

LogCoefficients from_coefficients(const std::vector<cplx>& c) {
    LogCoefficients out;
    out.log_mag.resize(c.size());
    out.phase.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double m = std::abs(c[j]);
        out.log_mag[j] = m > 0.0 ? std::log(m) : -kInf;
        out.phase[j] = m > 0.0 ? c[j] / m : cplx(1.0);
    }
    return out;
}

std::vector<cplx> to_coefficients(const LogCoefficients& c) {
    std::vector<cplx> out(c.log_mag.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = c.coefficient(j);
    return out;
}

double t_max(double a, double b) { return a < b ? 1.0 / (b - a) : kInf; }

double alpha_min_t(const FlowParams& fp) { return fp.a < fp.b ? fp.t * (fp.b - fp.a) : 0.0; }

std::size_t j_min(const FlowParams& fp) {
    if (!(fp.a < fp.b)) return 0;
    const double x = snap(static_cast<double>(fp.N) * fp.t * (fp.b - fp.a));
    return static_cast<std::size_t>(std::ceil(x));
}

std::size_t flow_steps(const FlowParams& fp) {
    const double nt = snap(static_cast<double>(fp.N) * fp.t);
    if (nt < 1.0) return 0;
    return static_cast<std::size_t>(std::floor(nt - 1.0)) + 1;
}

long long pt_shift(const FlowParams& fp) {
    return static_cast<long long>(std::floor(snap(static_cast<double>(fp.N) * fp.t * (fp.a - fp.b))));
}

void validate(const FlowParams& fp) {
    if (!(fp.t >= 0.0)) throw FlowError("flow time must be >= 0");
    if (!(fp.t < t_max(fp.a, fp.b)))
        throw FlowError("t = " + std::to_string(fp.t) + " reaches t_max = " + std::to_string(t_max(fp.a, fp.b)) +
                        ": Q_t^N is the zero polynomial");
    if (fp.N == 0) throw FlowError("degree N must be positive");
}

LogCoefficients flow_coefficients(const LogCoefficients& c0, const FlowParams& fp, bool serial) {
    validate(fp);
    if (c0.degree() != fp.N)
        throw FlowError("coefficient degree " + std::to_string(c0.degree()) + " does not match N = " +
                        std::to_string(fp.N));
    const std::size_t steps = flow_steps(fp);
    if (steps == 0) return c0;

    kernels::FlowFactorArgs args{fp.N, fp.a, fp.b, steps, j_min(fp)};
    std::vector<double> lf(fp.N + 1), sg(fp.N + 1);
    if (serial)
        kernels::flow_factors_serial(args, lf.data(), sg.data());
    else
        kernels::flow_factors_omp(args, lf.data(), sg.data());

    const double norm = -static_cast<double>(fp.N) * fp.t * fp.b * std::log(static_cast<double>(fp.N));
    LogCoefficients out = c0;
    for (std::size_t j = 0; j <= fp.N; ++j) {
        if (lf[j] == -kInf || c0.is_zero(j)) {
            out.log_mag[j] = -kInf;
            out.phase[j] = 1.0;
            continue;
        }
        out.log_mag[j] = c0.log_mag[j] + norm + lf[j];
        out.phase[j] = c0.phase[j] * sg[j];
    }
    if (out.is_zero(fp.N)) throw FlowError("flow killed the leading coefficient");
    return out;
}

std::size_t detect_j0(const LogCoefficients& c, const FlowParams& fp) {
    const std::size_t jm = j_min(fp);
    std::size_t last_zero = 0;
    bool any_zero = false, any_nonzero = false;
    for (std::size_t j = jm; j <= c.degree(); ++j) {
        if (c.is_zero(j)) {
            last_zero = j;
            any_zero = true;
        } else {
            any_nonzero = true;
        }
    }
    if (!any_nonzero) throw FlowError("all coefficients above j_min vanish");
    return any_zero ? last_zero - jm + 1 : 0;
}

ExponentialProfile qt_profile(const ExponentialProfile& g0, const FlowParams& fp) {
    require_profile_flow(g0, fp);
    if (fp.t == 0.0) return g0;
    const double a = fp.a, b = fp.b, t = fp.t;
    const double amin = alpha_min_t(fp);

    std::function<double(double)> G, dG;
    if (a == b) {
        G = [b, t](double al) { return al > 0.0 ? b * t * std::log(al) : -kInf; };
        dG = [b, t](double al) { return b * t / al; };
    } else {
        const double k = b / (a - b), sh = t * (a - b);
        G = [k, sh, b, t, amin](double al) {
            if (al < amin) return -kInf;
            return k * (xlogx(al + sh) - xlogx(al)) - b * t;
        };
        dG = [k, sh](double al) { return k * (std::log(al + sh) - std::log(al)); };
    }

    if (g0.closed_form()) {
        auto g = [g0g = g0.g, G, amin](double al) { return al < amin ? -kInf : g0g(al) + G(al); };
        std::function<double(double)> dg;
        if (g0.dg) dg = [g0d = g0.dg, dG](double al) { return g0d(al) + dG(al); };
        return make_profile(amin, g, dg, ProfileFamily::Custom, g0.grid_size());
    }
    std::vector<double> v(g0.grid_size());
    ExponentialProfile shape;
    shape.alpha_min = amin;
    shape.grid.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double al = shape.alpha_at(i);
        v[i] = g0(al) + G(al);
    }
    return profile_from_grid(amin, std::move(v));
}

ExponentialProfile pt_profile(const ExponentialProfile& g0, const FlowParams& fp) {
    require_profile_flow(g0, fp);
    if (fp.t == 0.0) return g0;
    const ExponentialProfile gt = qt_profile(g0, fp);
    const double sh = fp.t * (fp.a - fp.b);
    const double scale = 1.0 + sh;
    const double bmin = fp.a > fp.b ? sh / scale : 0.0;
    auto h = [gt, sh, scale, bmin](double al) {
        if (al < bmin) return -kInf;
        return gt(std::max(al * scale - sh, gt.alpha_min)) / scale;
    };
    std::function<double(double)> dh;
    if (gt.dg) dh = [gdg = gt.dg, sh, scale](double al) { return gdg(al * scale - sh); };
    if (gt.closed_form()) return make_profile(bmin, h, dh, ProfileFamily::Custom, g0.grid_size());
    ExponentialProfile shape;
    shape.alpha_min = bmin;
    shape.grid.resize(g0.grid_size());
    std::vector<double> v(g0.grid_size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = h(shape.alpha_at(i));
    return profile_from_grid(bmin, std::move(v));
}

double gamma_ratio_check(double z, double b) {
    if (!(z > 0.0) || !(z - b > 0.0)) throw DomainError("gamma_ratio_check needs z > 0 and z - b > 0");
    return std::lgamma(z) - std::lgamma(z - b) - b * std::log(z);
}

}  // namespace rootflow
