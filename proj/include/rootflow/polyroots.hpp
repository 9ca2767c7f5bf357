#ifndef ROOTFLOW_POLYROOTS_HPP
#define ROOTFLOW_POLYROOTS_HPP

#include <cstdint>
#include <vector>

#include "rootflow/flow.hpp"
#include "rootflow/profiles.hpp"

namespace rootflow {

enum class CoefficientTag { ComplexGaussian, RealGaussian, Rademacher };

struct CoefficientLaw {
    CoefficientTag tag = CoefficientTag::ComplexGaussian;
    std::uint64_t seed = 0;
};

struct RootCloud {
    std::vector<cplx> roots;
    std::vector<unsigned char> converged;  // per-root status
    std::size_t source_degree = 0;
    std::size_t sweeps = 0;
    std::size_t origin_roots = 0;  // appended analytically, not iterated

    bool all_converged() const;
};

struct RootFinderOptions {
    std::size_t max_sweeps = 200;
    double step_tol = 1e-13;
    bool serial = false;  // use the serial reference kernel
};

// Per-trial seed derived from a base seed (splitmix64).
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

LogCoefficients sample_polynomial(const ExponentialProfile& p, std::size_t N, const CoefficientLaw& law);

RootCloud find_roots(const LogCoefficients& c, const RootFinderOptions& opt = {});

// Radii at which the polynomial's Newton polygon puts its initial circles,
// one entry per root (origin roots excluded).
std::vector<double> newton_polygon_radii(const LogCoefficients& c);

struct EmpiricalCdf {
    std::vector<double> radii;  // sorted moduli
    double operator()(double r) const;  // #{|z| <= r}/n
    double left(double r) const;        // #{|z| < r}/n
};

EmpiricalCdf empirical_radial_cdf(const RootCloud& rc);

double ks_distance(const EmpiricalCdf& emp, const RadialMeasure& theory);

// |mean of exp(i k theta)| over the nonzero roots.
double angular_uniformity(const RootCloud& rc, int k);

// Relative backward residual |P(z)| / sum_j |c_j||z|^j.
double relative_residual(const LogCoefficients& c, cplx z);

}  // namespace rootflow

#endif  // ROOTFLOW_POLYROOTS_HPP
