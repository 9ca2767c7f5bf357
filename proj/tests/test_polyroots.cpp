#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "rootflow/errors.hpp"
#include "rootflow/polyroots.hpp"
#include "rootflow/radial.hpp"

using namespace rootflow;

namespace {

// Greedy nearest matching; returns the worst distance relative to 1 + |want|.
double match_error(std::vector<cplx> got, const std::vector<cplx>& want) {
    REQUIRE(got.size() == want.size());
    double worst = 0.0;
    for (const cplx& w : want) {
        auto it = std::min_element(got.begin(), got.end(),
                                   [&](const cplx& x, const cplx& y) { return std::abs(x - w) < std::abs(y - w); });
        worst = std::max(worst, std::abs(*it - w) / (1.0 + std::abs(w)));
        got.erase(it);
    }
    return worst;
}

// Parlett-Reinsch balancing with power-of-two scalings; without it the
// companion eigenvalues of Weyl-type coefficients lose about six digits.
void balance(Eigen::MatrixXcd& A) {
    const Eigen::Index n = A.rows();
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(A(j, i));
                    r += std::abs(A(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                changed = true;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

// Eigenvalues of the balanced companion matrix.
std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
    const auto n = static_cast<Eigen::Index>(c.size() - 1);
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) C(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    balance(C);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return out;
}

}  // namespace

TEST_CASE("Wilkinson polynomial of degree 12") {
    std::vector<double> c{1.0};
    for (int k = 1; k <= 12; ++k) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= k * c[j];
        }
        c = next;
    }
    std::vector<cplx> cc(c.begin(), c.end());
    const auto rc = find_roots(from_coefficients(cc));
    std::vector<cplx> want;
    for (int k = 1; k <= 12; ++k) want.emplace_back(k, 0.0);
    CHECK(match_error(rc.roots, want) < 1e-6);
    CHECK(rc.all_converged());
}

TEST_CASE("roots of a polynomial built from known roots") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 1.5), ph(0.0, 2 * M_PI);
    std::vector<cplx> want(30);
    for (auto& z : want) z = std::polar(u(rng), ph(rng));
    std::vector<cplx> c{1.0};
    for (const cplx& r : want) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= r * c[j];
        }
        c = next;
    }
    CHECK(match_error(find_roots(from_coefficients(c)).roots, want) < 1e-8);
}

TEST_CASE("companion matrix cross-check for sampled Weyl polynomials") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto lc = sample_polynomial(lo_profile(0.5), 48, {CoefficientTag::ComplexGaussian, seed});
        const auto rc = find_roots(lc);
        CHECK(match_error(rc.roots, companion_roots(to_coefficients(lc))) < 1e-8);
    }
}

TEST_CASE("origin roots are split off") {
    const auto rc = find_roots(from_coefficients({0.0, 0.0, 1.0, 1.0, 0.0}));
    CHECK(rc.origin_roots == 2);
    CHECK(rc.source_degree == 3);
    REQUIRE(rc.roots.size() == 3);
    CHECK(std::count(rc.roots.begin(), rc.roots.end(), cplx(0.0)) == 2);
    CHECK(std::abs(rc.roots[0] + 1.0) < 1e-14);
    CHECK_THROWS_AS(find_roots(from_coefficients({0.0, 0.0})), DomainError);
}

TEST_CASE("high degree Weyl roots have small backward error") {
    const auto lc = sample_polynomial(lo_profile(0.5), 500, {CoefficientTag::ComplexGaussian, 5});
    const auto rc = find_roots(lc);
    CHECK(rc.all_converged());
    CHECK(rc.roots.size() == 500);
    double worst = 0.0;
    for (const cplx& z : rc.roots) worst = std::max(worst, relative_residual(lc, z));
    CHECK(worst < 1e-12);
}

TEST_CASE("serial and OpenMP sweeps give the same roots") {
    const auto lc = sample_polynomial(lo_profile(0.5), 200, {CoefficientTag::RealGaussian, 9});
    RootFinderOptions serial;
    serial.serial = true;
    const auto a = find_roots(lc), b = find_roots(lc, serial);
    CHECK(a.sweeps == b.sweeps);
    CHECK(match_error(a.roots, b.roots) < 1e-12);
}

TEST_CASE("sampling is deterministic per seed") {
    const auto p = lo_profile(0.5);
    const auto x = sample_polynomial(p, 50, {CoefficientTag::ComplexGaussian, 42});
    const auto y = sample_polynomial(p, 50, {CoefficientTag::ComplexGaussian, 42});
    const auto z = sample_polynomial(p, 50, {CoefficientTag::ComplexGaussian, 43});
    CHECK(x.log_mag == y.log_mag);
    CHECK(x.log_mag != z.log_mag);
    const auto r = sample_polynomial(p, 50, {CoefficientTag::Rademacher, 1});
    for (std::size_t j = 0; j <= 50; ++j) {
        CHECK(r.log_mag[j] == doctest::Approx(50.0 * p(j / 50.0)));
        CHECK(std::abs(std::abs(r.phase[j].real()) - 1.0) < 1e-15);
    }
    CHECK(trial_seed(7, 0) != trial_seed(7, 1));
    CHECK(trial_seed(7, 3) == trial_seed(7, 3));
}

TEST_CASE("Newton polygon radii follow the profile") {
    // Rademacher Weyl coefficients: polygon slopes give radii sqrt(j/N)
    const auto lc = sample_polynomial(lo_profile(0.5), 400, {CoefficientTag::Rademacher, 1});
    auto radii = newton_polygon_radii(lc);
    std::sort(radii.begin(), radii.end());
    CHECK(radii.size() == 400);
    CHECK(radii[200] == doctest::Approx(std::sqrt(0.5)).epsilon(0.01));
}

TEST_CASE("KS distance") {
    const auto d = uniform_disk();
    RootCloud rc;
    const int n = 400;
    for (int k = 0; k < n; ++k) rc.roots.push_back(std::polar(std::sqrt((k + 0.5) / n), 0.1 * k));
    CHECK(ks_distance(empirical_radial_cdf(rc), d) <= 0.5 / n + 1e-12);
    RootCloud shifted;
    for (const cplx& z : rc.roots) shifted.roots.push_back(0.5 * z);
    CHECK(ks_distance(empirical_radial_cdf(shifted), d) > 0.7);
    CHECK_THROWS_AS(empirical_radial_cdf(RootCloud{}), DomainError);
}

TEST_CASE("KS distance sees circle atoms from both sides") {
    RootCloud rc;
    for (int k = 0; k < 100; ++k) rc.roots.push_back(std::polar(1.0, 0.0628 * k));
    CHECK(ks_distance(empirical_radial_cdf(rc), uniform_circle(1.0)) < 1e-12);
    CHECK(ks_distance(empirical_radial_cdf(rc), uniform_disk(1.0)) > 0.99);
}

TEST_CASE("angular uniformity") {
    RootCloud rc;
    for (int k = 0; k < 12; ++k) rc.roots.push_back(std::polar(0.5, 2 * M_PI * k / 12));
    rc.roots.push_back(0.0);
    CHECK(angular_uniformity(rc, 1) < 1e-14);
    CHECK(angular_uniformity(rc, 5) < 1e-14);
    CHECK(angular_uniformity(rc, 12) == doctest::Approx(1.0));
    CHECK_THROWS_AS(angular_uniformity(rc, 0), DomainError);
}

TEST_CASE("Vieta: the roots sum to -c_{N-1}/c_N") {
    for (std::size_t N : {5u, 16u, 32u}) {
        const auto lc = sample_polynomial(lo_profile(0.5), N, {CoefficientTag::ComplexGaussian, N});
        const auto c = to_coefficients(lc);
        cplx s = 0.0;
        for (const cplx& z : find_roots(lc).roots) s += z;
        const cplx want = -c[N - 1] / c[N];
        CHECK(std::abs(s - want) < 1e-8 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("root counts after the flow") {
    const auto g0 = lo_profile(0.5);
    const FlowParams fp{0.0, 1.0, 0.25, 64};
    const auto ct = flow_coefficients(sample_polynomial(g0, 64, {CoefficientTag::ComplexGaussian, 3}), fp);
    const auto rc = find_roots(ct);
    CHECK(rc.roots.size() - rc.origin_roots == 64 - j_min(fp) - detect_j0(ct, fp));
    CHECK(rc.origin_roots == j_min(fp));
}

TEST_CASE("root clouds are bitwise reproducible") {
    const auto lc = sample_polynomial(lo_profile(0.5), 300, {CoefficientTag::ComplexGaussian, 77});
    const auto a = find_roots(lc), b = find_roots(lc);
    REQUIRE(a.roots.size() == b.roots.size());
    for (std::size_t i = 0; i < a.roots.size(); ++i) REQUIRE(a.roots[i] == b.roots[i]);
}
