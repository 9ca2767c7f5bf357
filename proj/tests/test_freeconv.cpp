#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "rootflow/errors.hpp"
#include "rootflow/freeconv.hpp"
#include "rootflow/radial.hpp"

using namespace rootflow;

namespace {

// psi(chi(z)) - z with chi(z) = z S(z)/(1+z).
double roundtrip(const PositiveLaw& law, double z) {
    const double S = s_transform_numeric(law, z);
    return std::abs(psi_transform(law, z * S / (1.0 + z)).real() - z);
}

// Oracle for xi_gamma integrals: tanh-sinh on the raw density, which handles
// the x^{-1/2} and square-root edge singularities.
template <class F>
double xi_oracle(double gamma, F f) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double c = 4.0 * gamma / ((1.0 + gamma) * (1.0 + gamma));
    return ts.integrate([&](double x) { return xi_gamma_density(gamma, x) * f(x); }, 0.0, c) +
           xi_gamma_atom(gamma) * f(1.0);
}

}  // namespace

TEST_CASE("S-transform of the projection law") {
    const auto nu = projection_law(0.3);
    for (double z : {-0.6, -0.3, -0.05, 0.0})
        CHECK(s_transform_numeric(nu, z) == doctest::Approx((1.0 + z) / (0.7 + z)).epsilon(1e-12));
    CHECK_THROWS_AS(s_transform_numeric(nu, -0.7), DomainError);
    CHECK_THROWS_AS(s_transform_numeric(nu, 0.1), DomainError);
    CHECK_THROWS_AS(projection_law(1.5), DomainError);
}

TEST_CASE("S-transform of a point mass") {
    const auto d = dirac_law(2.0);
    for (double z : {-0.9, -0.4, 0.0}) CHECK(s_transform_numeric(d, z) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("psi and S round trip") {
    for (const auto& law : {projection_law(0.3), xi_law(0.5), xi_law(1.5), eta_law(0.7)}) {
        const double lo = law.mass_at_zero() - 1.0;
        for (int i = 1; i < 20; ++i) {
            const double z = lo * i / 20.0;
            CAPTURE(z);
            CHECK(roundtrip(law, z) < 1e-12);
        }
    }
}

TEST_CASE("xi_gamma total mass") {
    for (double g : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(xi_gamma_mass(g) - 1.0) < 1e-8);
        CHECK(std::abs(xi_oracle(g, [](double) { return 1.0; }) - 1.0) < 1e-8);
    }
    CHECK(xi_gamma_atom(0.5) == 0.5);
    CHECK(xi_gamma_atom(2.0) == 0.0);
    CHECK_THROWS_AS(xi_gamma_mass(0.0), DomainError);
}

TEST_CASE("xi_gamma Cauchy transform against quadrature") {
    for (double g : {0.5, 2.0})
        for (cplx z : {cplx(2.0, 1.0), cplx(-1.0, 0.5), cplx(0.3, -0.2), cplx(-3.0, 0.0)}) {
            const double re = xi_oracle(g, [z](double x) { return (1.0 / (z - x)).real(); });
            const double im = xi_oracle(g, [z](double x) { return (1.0 / (z - x)).imag(); });
            const cplx G = cauchy_transform_xi(g, z);
            CHECK(std::abs(G - cplx(re, im)) < 1e-9);
        }
    CHECK_THROWS_AS(cauchy_transform_xi(0.5, 0.5), DomainError);
    CHECK_THROWS_AS(cauchy_transform_xi(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(cauchy_transform_xi(0.5, 0.0), DomainError);
}

TEST_CASE("psi agrees with its definition for xi") {
    const double g = 0.5, z = -0.8;
    const double want = xi_oracle(g, [z](double x) { return z * x / (1.0 - z * x); });
    CHECK(psi_transform(xi_law(g), z).real() == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("S at zero is the reciprocal mean") {
    CHECK(s_transform_numeric(projection_law(0.25), 0.0) == doctest::Approx(1.0 / 0.75));
    const double mean = xi_oracle(1.5, [](double x) { return x; });
    CHECK(s_transform_numeric(xi_law(1.5), 0.0) == doctest::Approx(1.0 / mean).epsilon(1e-9));
}

TEST_CASE("quantile from the S-transform matches the transport quantile") {
    struct P {
        double a, b, t;
    };
    for (const P p : {P{0, 1, 0.3}, P{-1, 1, 0.2}, P{2, 1, 0.4}, P{1, 1, 0.3}}) {
        const auto law = rtab_law(p.a, p.b, p.t);
        for (int i = 1; i <= 100; ++i) {
            const double al = i / 100.0;
            const double want = transport_quantile(p.a, p.b, p.t, al);
            CHECK(std::abs(hl_quantile_from_s(law, al) - want) <= 1e-8 * std::max(1.0, want));
        }
    }
}

TEST_CASE("S-transform of the transport measure") {
    CHECK(s_transform_rtab(0, 1, 0.0, -0.5) == cplx(1.0));
    CHECK(s_transform_rtab(1, 1, 0.25, 0.0).real() == doctest::Approx(std::exp(0.5)));
    CHECK_THROWS_AS(s_transform_rtab(0, 1, 1.0, -0.5), FlowError);
    CHECK_THROWS_AS(s_transform_rtab(1, 1, 0.25, -1.0), DomainError);
}

TEST_CASE("S-transform is multiplicative under free multiplicative powers") {
    // HL quantile of nu^{boxtimes delta} via the otimes route vs the closed form S^delta
    const double g = 0.3;
    const auto nu = projection_law(g);
    const auto base = measure_from_quantile([&](double al) { return hl_quantile_from_s(nu, al); }, 513);
    RadialMeasure pw = base;
    for (int delta = 2; delta <= 3; ++delta) {
        pw = radial_mult_convolve(pw, base);
        for (double al : {0.35, 0.5, 0.65, 0.8, 0.95}) {
            const double z = al - 1.0;
            const double S = std::pow((z + 1) / (z + 1 - g), delta);
            CHECK(std::abs(pw.quantile_at(al) - 1.0 / std::sqrt(S)) < 1e-8);
        }
    }
}

TEST_CASE("S-transform of the transport law approaches the a = b branch") {
    const double b = 1.0, t = 0.3, z = -0.4;
    const cplx limit = s_transform_rtab(b, b, t, z);
    CHECK(std::abs(limit - std::exp(2 * b * t / (z + 1))) < 1e-15);
    double prev = INFINITY;
    for (int k = 2; k <= 6; ++k) {
        const double err = std::abs(s_transform_rtab(b - std::pow(10.0, -k), b, t, z) - limit);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-5);
}
