#include <doctest.h>

#include <cmath>

#include "rootflow/errors.hpp"
#include "rootflow/flow.hpp"
#include "rootflow/radial.hpp"

using namespace rootflow;

TEST_CASE("transport quantile closed forms") {
    // a=0, b=1: (alpha - t)/alpha
    CHECK(transport_quantile(0, 1, 0.3, 0.6) == doctest::Approx(0.5));
    CHECK(transport_quantile(0, 1, 0.3, 0.2) == 0.0);
    // a=b=1: exp(-t/alpha)
    CHECK(transport_quantile(1, 1, 0.3, 0.5) == doctest::Approx(std::exp(-0.6)));
    // a=0, b=-1: ((alpha + t)/alpha)^{1}
    CHECK(transport_quantile(0, -1, 0.3, 0.3) == doctest::Approx(2.0));
    CHECK(transport_quantile(2, 1, 0.5, 1.0) == doctest::Approx(1.0 / 1.5));  // exponent b/(b-a) = -1
    CHECK(transport_quantile(0, 1, 0.0, 0.1) == 1.0);
}

TEST_CASE("transport measure of the derivative flow has an origin atom t") {
    const auto r = transport_measure(0, 1, 0.4);
    CHECK(r.atom0_mass == doctest::Approx(0.4));
    CHECK(r.r_out() == doctest::Approx(0.6));
    CHECK(cdf(r, 0.0) == doctest::Approx(0.4));
    CHECK_THROWS_AS(transport_measure(0, 1, 1.0), FlowError);
}

TEST_CASE("sigma quantile is the product of the quantiles") {
    const auto mu0 = kz_measure(lo_profile(0.5));
    for (double t : {0.1, 0.4, 0.7}) {
        const auto s = pushforward_sigma(mu0, 0, 1, t);
        for (std::size_t k = 1; k < s.grid_size(); k += 37) {
            const double al = s.alpha_at(k);
            CHECK(std::abs(s.quantile[k] - std::sqrt(al) * std::max(0.0, (al - t) / al)) < 1e-12);
        }
        CHECK(s.atom0_mass == doctest::Approx(t));
    }
}

TEST_CASE("push-forward of Weyl under differentiation") {
    // mu_t quantile: alpha = beta(1-t) + t, q = sqrt(alpha) (alpha - t)/alpha
    const double t = 0.4;
    const auto mu = pushforward_mu(kz_measure(lo_profile(0.5)), 0, 1, t);
    CHECK(mu.atom0_mass == 0.0);
    for (double beta : {0.1, 0.5, 0.9}) {
        const double al = beta * (1 - t) + t;
        CHECK(mu.quantile_at(beta) == doctest::Approx(std::sqrt(al) * (al - t) / al).epsilon(1e-12));
    }
    CHECK(mu.r_out() == doctest::Approx(0.6));
}

TEST_CASE("push-forward agrees with the limiting measure of the flowed profile") {
    struct Case {
        double beta, a, b, t;
    };
    for (const Case c : {Case{0.5, 0, 1, 0.3}, Case{0.5, 1, 1, 0.3}, Case{0.5, 2, 1, 0.3}, Case{1.0, 0, 1, 0.5},
                         Case{0.5, -1, 1, 0.25}, Case{1.0, 3, 2, 0.2}}) {
        CAPTURE(c.a);
        CAPTURE(c.b);
        const auto g0 = lo_profile(c.beta);
        const auto theory = pushforward_mu(kz_measure(g0), c.a, c.b, c.t);
        const auto via_profile = kz_measure(pt_profile(g0, {c.a, c.b, c.t, 1}));
        for (double beta : {0.05, 0.2, 0.5, 0.8, 0.99})
            CHECK(via_profile.quantile_at(beta) == doctest::Approx(theory.quantile_at(beta)).epsilon(1e-9));
    }
}

TEST_CASE("origin mass after the a > b flow") {
    // a - b = 1: t N extra roots at 0, origin mass t/(1+t)
    const auto mu = pushforward_mu(kz_measure(lo_profile(0.5)), 3, 2, 0.25);
    CHECK(mu.atom0_mass == doctest::Approx(0.25 / 1.25));
    CHECK(mu.quantile_at(0.1) == 0.0);
}

TEST_CASE("transport_point moves |w| along the sigma quantile") {
    const auto mu0 = kz_measure(lo_profile(0.5));
    const TransportMap T{0, 1, 0.3, mu0};
    for (double al : {0.35, 0.6, 0.95}) {
        const cplx w = std::polar(std::sqrt(al), 0.7);
        const cplx z = transport_point(T, w);
        CHECK(std::abs(z) == doctest::Approx(std::sqrt(al) * (al - 0.3) / al).epsilon(1e-10));
        CHECK(std::arg(z) == doctest::Approx(0.7));
    }
    CHECK(transport_point(T, std::polar(0.5, 1.0)) == cplx(0.0));
}

TEST_CASE("fractional free power of the uniform disk") {
    const auto d = uniform_disk(1.0);
    const auto p4 = fractional_free_selfconv(d, 4.0, false);
    double worst = 0.0;
    for (std::size_t k = 1; k < p4.grid_size(); ++k)
        worst = std::max(worst, std::abs(p4.quantile[k] - 2.0 * std::sqrt(p4.alpha_at(k))));
    CHECK(worst < 1e-12);
    const auto h4 = fractional_free_selfconv(d, 4.0, true);
    CHECK(h4.quantile_at(0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("fractional free powers form a semigroup") {
    const auto mu = kz_measure(lo_profile(0.8));
    for (bool hat : {false, true}) {
        const auto x = fractional_free_selfconv(fractional_free_selfconv(mu, 1.5, hat), 2.0, hat);
        const auto y = fractional_free_selfconv(mu, 3.0, hat);
        for (double a : {0.1, 0.4, 0.9}) CHECK(x.quantile_at(a) == doctest::Approx(y.quantile_at(a)).epsilon(1e-12));
    }
    CHECK(fractional_free_selfconv(mu, 1.0, false).quantile_at(0.5) == mu.quantile_at(0.5));
}

TEST_CASE("fractional free power preconditions") {
    CHECK_THROWS_AS(fractional_free_selfconv(kz_measure(lo_profile(0.0)), 2.0, false), PreconditionError);
    CHECK_THROWS_AS(fractional_free_selfconv(transport_measure(0, 1, 0.3), 2.0, false), PreconditionError);
    CHECK_THROWS_AS(fractional_free_selfconv(uniform_disk(), 0.5, false), DomainError);
}

TEST_CASE("radial multiplicative convolution") {
    const auto d = uniform_disk(2.0), c = uniform_circle(3.0);
    const auto m = radial_mult_convolve(d, c);
    CHECK(m.quantile_at(0.25) == doctest::Approx(3.0));
    CHECK(m.r_out() == doctest::Approx(6.0));
    // commutative
    const auto w = kz_measure(lo_profile(0.5)), e = kz_measure(lo_profile(1.0));
    const auto x = radial_mult_convolve(w, e), y = radial_mult_convolve(e, w);
    for (double a : {0.2, 0.7}) CHECK(x.quantile_at(a) == doctest::Approx(y.quantile_at(a)));
}

TEST_CASE("dilate and mix_origin") {
    const auto d = dilate(uniform_disk(1.0), 3.0);
    CHECK(d.r_out() == doctest::Approx(3.0));
    CHECK(cdf(d, 1.5) == doctest::Approx(0.25));
    const auto m = mix_origin(uniform_disk(1.0), 0.2);
    CHECK(m.atom0_mass == doctest::Approx(0.2));
    CHECK(cdf(m, 0.5) == doctest::Approx(0.2 + 0.8 * 0.25).epsilon(1e-9));
    CHECK_THROWS_AS(dilate(d, 0.0), DomainError);
    CHECK_THROWS_AS(mix_origin(d, 1.0), DomainError);
}

TEST_CASE("oplus/otimes relation holds on the grid") {
    for (double beta : {0.5, 1.0})
        for (double t : {0.25, 0.5}) CHECK(oplus_otimes_relation_check(kz_measure(lo_profile(beta)), t) < 1e-9);
    CHECK(oplus_otimes_relation_check(uniform_disk(), 0.0) == 0.0);
}

TEST_CASE("randomized Kac transport") {
    const cplx w = std::polar(1.0, 0.3);
    CHECK(std::abs(kac_randomized_transport(w, 0.5, 0, 1, 0.3)) == doctest::Approx(0.4));
    CHECK(kac_randomized_transport(w, 0.2, 0, 1, 0.3) == cplx(0.0));
    CHECK_THROWS_AS(kac_randomized_transport(w, 0.0, 0, 1, 0.3), DomainError);
}

TEST_CASE("otimes is associative with the unit circle as identity") {
    const auto x = kz_measure(lo_profile(0.5)), y = kz_measure(lo_profile(1.0)), z = transport_measure(1, 1, 0.2);
    const auto l = radial_mult_convolve(radial_mult_convolve(x, y), z);
    const auto r = radial_mult_convolve(x, radial_mult_convolve(y, z));
    for (std::size_t k = 0; k < l.grid_size(); k += 31) CHECK(l.quantile[k] == doctest::Approx(r.quantile[k]).epsilon(1e-14));
    const auto e = radial_mult_convolve(x, uniform_circle(1.0));
    for (std::size_t k = 0; k < e.grid_size(); k += 31) CHECK(e.quantile[k] == x.quantile[k]);
}

TEST_CASE("sigma_t is mu_0 otimes rho_t") {
    const auto mu0 = kz_measure(lo_profile(0.5));
    struct P {
        double a, b, t;
    };
    for (const P p : {P{0, 1, 0.4}, P{-1, 1, 0.2}, P{1, 1, 0.3}, P{2, 1, 0.3}, P{0, -1, 0.3}}) {
        const auto s = pushforward_sigma(mu0, p.a, p.b, p.t);
        const auto c = radial_mult_convolve(mu0, transport_measure(p.a, p.b, p.t, mu0.grid_size()));
        for (std::size_t k = 1; k < s.grid_size(); ++k) REQUIRE(std::abs(s.quantile[k] - c.quantile[k]) < 1e-12);
        if (p.a < p.b) CHECK(s.atom0_mass == doctest::Approx(p.t * (p.b - p.a)));
    }
}

TEST_CASE("push-forward quantiles stay monotone for strictly concave sources") {
    for (double beta : {0.3, 0.5, 1.0})
        for (const auto& [a, b] : {std::pair{0.0, 1.0}, std::pair{-1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{1.0, 1.0}}) {
            const auto mu = pushforward_mu(kz_measure(lo_profile(beta)), a, b, 0.2);
            CHECK((mu.warnings & kWarnNonMonotone) == 0u);
            for (std::size_t k = 1; k < mu.grid_size(); ++k) REQUIRE(mu.quantile[k] >= mu.quantile[k - 1]);
        }
    auto m = measure_from_grid({0.0, 0.5, 0.4, 0.9});
    CHECK((m.warnings & kWarnNonMonotone) != 0u);
}
