#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "so21/distance.hpp"
#include "so21/geodesic.hpp"
#include "so21/oracle.hpp"
#include "so21/structure.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<so21::GroupElement> sample_targets(int n) {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> ub(-3.0, 3.0), up(0.0, 2.0 * kPi),
        uu(0.05, 0.9);
    std::vector<so21::GroupElement> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double beta = ub(rng);
        if (std::abs(beta) < 0.05) beta = 0.05;
        const double t = uu(rng) * std::min(so21::cut_time(beta), 8.0);
        out.push_back(so21::geodesic_point(beta, up(rng), t));
    }
    return out;
}

void BM_GeodesicPoint(benchmark::State& state) {
    double t = 0.0;
    for (auto _ : state) {
        t += 1e-6;
        benchmark::DoNotOptimize(so21::geodesic_point(1.3, 0.7, 1.0 + t));
    }
}
BENCHMARK(BM_GeodesicPoint);

void BM_MatrixExponential(benchmark::State& state) {
    const so21::AlgebraElement x{0.9, -0.4, 1.2};
    for (auto _ : state) benchmark::DoNotOptimize(so21::exp_algebra(x));
}
BENCHMARK(BM_MatrixExponential);

void BM_DistanceSolve(benchmark::State& state) {
    const auto targets = sample_targets(256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            so21::distance_from_identity(targets[i % targets.size()]));
        ++i;
    }
}
BENCHMARK(BM_DistanceSolve);

void BM_CutTimeScan(benchmark::State& state) {
    double beta = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(so21::cut_time(beta));
        beta = 0.3 + std::fmod(beta, 1.0);
    }
}
BENCHMARK(BM_CutTimeScan);

void BM_OracleCoarseGrid(benchmark::State& state) {
    const so21::GroupElement target = so21::geodesic_point(0.5, 1.0, 0.7);
    so21::GridSpec grid;
    grid.beta_steps = 31;
    grid.phi_steps = 32;
    grid.t_steps = 81;
    grid.t_max = 2.0;
    grid.refine_rounds = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(so21::shoot_min_time(target, grid, 1e-6));
}
BENCHMARK(BM_OracleCoarseGrid)->Arg(0)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
