#ifndef ROOTFLOW_PROFILES_HPP
#define ROOTFLOW_PROFILES_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace rootflow {

inline constexpr std::size_t kDefaultGridSize = 4097;

enum class ProfileFamily { LittlewoodOfford, Custom, Grid };

// A linear piece of a concave majorant. Maps to a circle atom of radius
// exp(-slope) and mass alpha_end - alpha_begin.
struct HullSegment {
    double alpha_begin = 0.0;
    double alpha_end = 0.0;
    double slope = 0.0;
};

// g : [alpha_min, 1] -> [-inf, inf). Always carries a uniform grid of
// samples; closed-form profiles additionally carry g and its left derivative.
// Treat as immutable once built.
struct ExponentialProfile {
    ProfileFamily family = ProfileFamily::Grid;
    double beta = 0.0;  // LittlewoodOfford only
    double alpha_min = 0.0;
    std::function<double(double)> g;
    std::function<double(double)> dg;
    std::vector<double> grid;
    bool concave = false;
    bool strictly_concave = false;
    std::vector<HullSegment> flat_segments;

    bool closed_form() const { return static_cast<bool>(g); }
    std::size_t grid_size() const { return grid.size(); }
    double step() const { return (1.0 - alpha_min) / static_cast<double>(grid.size() - 1); }
    double alpha_at(std::size_t i) const;
    // -inf below alpha_min, right-continuous at alpha_min. Grid profiles use
    // linear interpolation between samples.
    double operator()(double alpha) const;
};

// Sample g on the grid and set the concavity flags.
ExponentialProfile make_profile(double alpha_min, std::function<double(double)> g,
                                std::function<double(double)> dg,
                                ProfileFamily family = ProfileFamily::Custom,
                                std::size_t grid_size = kDefaultGridSize);
ExponentialProfile profile_from_grid(double alpha_min, std::vector<double> values);

ExponentialProfile lo_profile(double beta, std::size_t grid_size = kDefaultGridSize);

double left_derivative(const ExponentialProfile& p, double alpha);

ExponentialProfile concave_majorant(const ExponentialProfile& p);

struct CircleAtom {
    double radius = 0.0;
    double mass = 0.0;
};

enum MeasureWarning : unsigned {
    kWarnNonStrictSource = 1u,
    kWarnNonMonotone = 2u,
};

// Rotation invariant probability measure on C, stored through its radial
// quantile on the grid alpha_k = k/(M-1). quantile[0] holds the right limit
// q(0+) (the inner radius); the quantile itself is 0 at alpha = 0.
struct RadialMeasure {
    std::vector<double> quantile;
    double atom0_mass = 0.0;
    std::vector<CircleAtom> circle_atoms;
    // optional closed-form quantile, used where available for exact checks
    std::function<double(double)> exact;
    unsigned warnings = 0;

    std::size_t grid_size() const { return quantile.size(); }
    double alpha_at(std::size_t k) const {
        return static_cast<double>(k) / static_cast<double>(quantile.size() - 1);
    }
    double quantile_at(double alpha) const;
    double r_in() const { return quantile.front(); }
    double r_out() const { return quantile.back(); }
};

// Builds a measure from a quantile callable; atoms are detected from flat runs
// unless given explicitly.
RadialMeasure measure_from_quantile(const std::function<double(double)>& q,
                                    std::size_t grid_size = kDefaultGridSize,
                                    bool keep_exact = true);
RadialMeasure measure_from_grid(std::vector<double> quantile);
// Recompute atom0_mass, circle_atoms and the monotonicity warning from the grid.
void detect_atoms(RadialMeasure& m, double analytic_atom0 = -1.0);

RadialMeasure kz_measure(const ExponentialProfile& p);
RadialMeasure uniform_disk(double radius = 1.0, std::size_t grid_size = kDefaultGridSize);
RadialMeasure uniform_circle(double radius = 1.0, std::size_t grid_size = kDefaultGridSize);

// alpha_0(r) = sup{alpha : q(alpha) <= r}, right-continuous in r.
double cdf(const RadialMeasure& m, double r);
// mass of the open disk of radius r.
double cdf_left(const RadialMeasure& m, double r);

// 1 - atom0 - circle atoms, i.e. the part without atoms.
double continuous_mass(const RadialMeasure& m);

}  // namespace rootflow

#endif  // ROOTFLOW_PROFILES_HPP
