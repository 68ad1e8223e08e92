#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "rvfl/checks.hpp"
#include "rvfl/kernel.hpp"
#include "rvfl/network.hpp"
#include "rvfl/spectral.hpp"
#include "rvfl/targets.hpp"

namespace {

const rvfl::Pipeline& tent_pipeline() {
    static rvfl::Pipeline pipe = rvfl::build_pipeline(
        rvfl::make_builtin_target("tent", 1, 201), 20.0, 0.05, 1.0, 1);
    return pipe;
}

void bm_kernel_table_build(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        rvfl::SmoothingKernel kernel(m);
        benchmark::DoNotOptimize(kernel.psi_cap_radial(0.5));
    }
}
BENCHMARK(bm_kernel_table_build)->Arg(1)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void bm_psi_lookup(benchmark::State& state) {
    rvfl::SmoothingKernel kernel(3);
    double r = 0.0;
    for (auto _ : state) {
        r += 1e-4;
        if (r > 1.7) r = 0.0;
        benchmark::DoNotOptimize(kernel.psi_cap_radial(r));
    }
}
BENCHMARK(bm_psi_lookup);

void bm_fourier_eval(benchmark::State& state) {
    const auto& pipe = tent_pipeline();
    Eigen::VectorXd v(1);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.37;
        if (t > 19.0) t = 0.0;
        v[0] = t;
        benchmark::DoNotOptimize(pipe.surrogate->fourier(v));
    }
}
BENCHMARK(bm_fourier_eval);

void bm_g_quadrature(benchmark::State& state) {
    const auto& pipe = tent_pipeline();
    Eigen::VectorXd x(1);
    x[0] = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(pipe.surrogate->g_quadrature(x));
}
BENCHMARK(bm_g_quadrature)->Unit(benchmark::kMicrosecond);

void bm_build_constructive(benchmark::State& state) {
    const auto& pipe = tent_pipeline();
    const int n = static_cast<int>(state.range(0));
    rvfl::WeightDensity density(pipe.surrogate, 1.0, pipe.extension->domain_radius(),
                                pipe.ktilde_volume);
    rvfl::HiddenLayer layer = rvfl::sample_hidden(n, 1, 1.0, 1.0, 42);
    for (auto _ : state) {
        rvfl::RvflNetwork net = rvfl::build_constructive(layer, density);
        benchmark::DoNotOptimize(net.a.sum());
    }
}
BENCHMARK(bm_build_constructive)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void bm_network_eval_batch(benchmark::State& state) {
    const auto& pipe = tent_pipeline();
    rvfl::WeightDensity density(pipe.surrogate, 1.0, pipe.extension->domain_radius(),
                                pipe.ktilde_volume);
    rvfl::HiddenLayer layer = rvfl::sample_hidden(10000, 1, 1.0, 1.0, 42);
    rvfl::RvflNetwork net = rvfl::build_constructive(layer, density);
    const auto& grid = pipe.sample_points;
    for (auto _ : state) benchmark::DoNotOptimize(net.eval_batch(grid));
}
BENCHMARK(bm_network_eval_batch)->Unit(benchmark::kMillisecond);

void bm_fit_least_squares(benchmark::State& state) {
    const auto& pipe = tent_pipeline();
    const int n = static_cast<int>(state.range(0));
    rvfl::HiddenLayer layer = rvfl::sample_hidden(n, 1, 1.0, 1.0, 42);
    for (auto _ : state) {
        rvfl::RvflNetwork net =
            rvfl::fit_least_squares(layer, pipe.sample_points, pipe.sample_values);
        benchmark::DoNotOptimize(net.a.sum());
    }
}
BENCHMARK(bm_fit_least_squares)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
