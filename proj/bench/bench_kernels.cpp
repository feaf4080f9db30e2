// Serial reference vs OpenMP kernels across sizes. The dispatch threshold in
// kern:: keeps small production grids on the serial path; this target shows
// where the parallel path starts paying off.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wpme/kernels.hpp"
#include "wpme/solver.hpp"

using namespace wpme;

namespace {

struct Data {
    std::vector<double> w, u, v, g, out;
    explicit Data(std::size_t n) : w(n), u(n), v(n), g(n ? n - 1 : 0), out(n) {
        std::mt19937 rng(1234);
        std::uniform_real_distribution<double> d(0.1, 2.0), s(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = d(rng);
            u[i] = s(rng);
            v[i] = s(rng);
            if (i + 1 < n) g[i] = d(rng);
        }
    }
};

void norm_serial(benchmark::State& state) {
    Data d(std::size_t(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kern::weighted_pow_sum_serial(d.w, d.u, 2.5));
}

void norm_omp(benchmark::State& state) {
    Data d(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kern::weighted_pow_sum(d.w, d.u, 2.5));
}

void residual_serial(benchmark::State& state) {
    Data d(std::size_t(state.range(0)));
    for (auto _ : state) {
        kern::be_residual_serial(d.w, d.g, 0.5, 0.5, d.v, d.u, d.u, 1e-3, d.out);
        benchmark::ClobberMemory();
    }
}

void residual_omp(benchmark::State& state) {
    Data d(std::size_t(state.range(0)));
    for (auto _ : state) {
        kern::be_residual(d.w, d.g, 0.5, 0.5, d.v, d.u, d.u, 1e-3, d.out);
        benchmark::ClobberMemory();
    }
}

void phi_serial(benchmark::State& state) {
    Data d(std::size_t(state.range(0)));
    PhiEps phi(2.0, 1e-6);
    for (auto _ : state) {
        for (std::size_t i = 0; i < d.u.size(); ++i) d.out[i] = phi.phi(d.u[i]);
        benchmark::ClobberMemory();
    }
}

void phi_omp(benchmark::State& state) {
    Data d(std::size_t(state.range(0)));
    PhiEps phi(2.0, 1e-6);
    for (auto _ : state) {
        phi.phi_vec(d.u, d.out);
        benchmark::ClobberMemory();
    }
}

} // namespace

BENCHMARK(norm_serial)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(norm_omp)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(residual_serial)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(residual_omp)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(phi_serial)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(phi_omp)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
