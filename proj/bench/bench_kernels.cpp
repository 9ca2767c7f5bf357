// OpenMP kernels against the serial reference. Run with
//   ./build/bench_kernels --benchmark_counters_tabular=true
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "rootflow/flow.hpp"
#include "rootflow/harness.hpp"
#include "rootflow/kernels.hpp"
#include "rootflow/polyroots.hpp"
#include "rootflow/profiles.hpp"

using namespace rootflow;

namespace {

template <bool Serial>
void BM_FlowFactors(benchmark::State& st) {
    const auto N = static_cast<std::size_t>(st.range(0));
    // a = 0, b = 1, t = 0.5: N/2 derivative steps
    const kernels::FlowFactorArgs args{N, 0.0, 1.0, N / 2, 0};
    std::vector<double> lf(N + 1), sg(N + 1);
    for (auto _ : st) {
        if constexpr (Serial)
            kernels::flow_factors_serial(args, lf.data(), sg.data());
        else
            kernels::flow_factors_omp(args, lf.data(), sg.data());
        benchmark::DoNotOptimize(lf.data());
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * static_cast<std::int64_t>((N + 1) * (N / 2)));
}

struct SweepFixture {
    std::vector<double> log_mag;
    std::vector<cplx> phase, z, z_next;
    std::vector<unsigned char> done;
    std::vector<double> step, resid;

    explicit SweepFixture(std::size_t n) : z(n), z_next(n), done(n, 0), step(n), resid(n) {
        const auto c = sample_polynomial(lo_profile(0.5), n, {CoefficientTag::ComplexGaussian, 11});
        log_mag = c.log_mag;
        phase = c.phase;
        for (std::size_t i = 0; i < n; ++i)
            z[i] = std::polar(0.9, 2 * M_PI * (static_cast<double>(i) + 0.25) / static_cast<double>(n));
    }
};

template <bool Serial>
void BM_AberthSweep(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    SweepFixture f(n);
    const kernels::ScaledPoly p{f.log_mag.data(), f.phase.data(), n};
    for (auto _ : st) {
        if constexpr (Serial)
            kernels::aberth_sweep_serial(p, f.z.data(), f.done.data(), f.z_next.data(), f.step.data(), f.resid.data(), n);
        else
            kernels::aberth_sweep_omp(p, f.z.data(), f.done.data(), f.z_next.data(), f.step.data(), f.resid.data(), n);
        benchmark::DoNotOptimize(f.z_next.data());
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * static_cast<std::int64_t>(n * n));
}

template <bool Serial>
void BM_FindRoots(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto c = sample_polynomial(lo_profile(0.5), n, {CoefficientTag::ComplexGaussian, 5});
    RootFinderOptions opt;
    opt.serial = Serial;
    for (auto _ : st) benchmark::DoNotOptimize(find_roots(c, opt));
}

}  // namespace

BENCHMARK(BM_FlowFactors<true>)->Name("flow_factors/serial")->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FlowFactors<false>)->Name("flow_factors/omp")->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_AberthSweep<true>)->Name("aberth_sweep/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AberthSweep<false>)->Name("aberth_sweep/omp")->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_FindRoots<true>)->Name("find_roots/serial")->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FindRoots<false>)->Name("find_roots/omp")->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
