#ifndef ROOTFLOW_KERNELS_HPP
#define ROOTFLOW_KERNELS_HPP

// Hot loops. Each kernel has an OpenMP version (kernels.cpp) and a plain
// serial version (kernels_reference.cpp) kept as the testing reference.

#include <complex>
#include <cstddef>

namespace rootflow::kernels {

using cplx = std::complex<double>;

struct FlowFactorArgs {
    std::size_t N = 0;      // degree
    double a = 0.0;
    double b = 1.0;
    std::size_t steps = 0;  // number of D^{a,b} applications
    std::size_t j_first = 0;  // entries below this index are structurally zero
};

// For each j in [0, N]: log_factor[j] = sum_m [lgamma(j+1+m(a-b)) - lgamma(j+1+m(a-b)-b)]
// and sign[j] the sign of the Gamma product; -inf marks an entry the flow kills.
void flow_factors_omp(const FlowFactorArgs& args, double* log_factor, double* sign);
void flow_factors_serial(const FlowFactorArgs& args, double* log_factor, double* sign);

// Polynomial sum_j exp(log_mag[j]) phase[j] z^j with no zero at the origin.
struct ScaledPoly {
    const double* log_mag = nullptr;
    const cplx* phase = nullptr;
    std::size_t degree = 0;
};

// One Jacobi Aberth-Ehrlich sweep over n roots. Roots with done[i] != 0 are
// copied unchanged. step[i] receives |correction|, resid[i] the relative
// backward residual |p(z_i)| / sum_j |c_j| |z_i|^j at the old iterate.
void aberth_sweep_omp(const ScaledPoly& p, const cplx* z, const unsigned char* done, cplx* z_next,
                      double* step, double* resid, std::size_t n);
void aberth_sweep_serial(const ScaledPoly& p, const cplx* z, const unsigned char* done, cplx* z_next,
                         double* step, double* resid, std::size_t n);

}  // namespace rootflow::kernels

#endif  // ROOTFLOW_KERNELS_HPP
