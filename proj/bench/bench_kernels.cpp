// Serial vs OpenMP versions of the data-parallel kernels.

#include <array>
#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "pointwave/field_assembly.hpp"
#include "pointwave/kernels.hpp"
#include "pointwave/quadrature.hpp"

using namespace pointwave;

namespace {

std::vector<quadrature::Panel> panels(std::int64_t n) {
    return quadrature::build_panels(0.0, 20.0, {}, 20.0 / static_cast<double>(n));
}

auto integrand = [](double r) -> std::array<double, 2> {
    return {std::exp(-r) * std::sin(3 * r), std::cos(r) / (1 + r * r)};
};

void BM_integrate_panels(benchmark::State& st) {
    const auto p = panels(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::integrate_panels<2>(p, integrand));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_integrate_panels_serial(benchmark::State& st) {
    const auto p = panels(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::integrate_panels_serial<2>(p, integrand));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

// Field evaluation is the expensive per-point work of snapshots and oracle comparisons.
struct FieldFixture {
    InitialState state;
    ZetaHistory history;
    FreeWave wave;
    std::vector<double> radii;
    std::vector<FieldSample> out;

    explicit FieldFixture(std::size_t n)
        : state(make_initial_state(RadialProfile::bump(Nonlinearity::cubic().force(0.5), 1.0),
                                   RadialProfile::zero(), 0.5, 0.3, Nonlinearity::cubic())),
          history(integrate(state, build_truncation(Nonlinearity::cubic(), 1.6), [] {
              ODEConfig c;
              c.T_final = 10.0;
              return c;
          }())),
          wave(state), radii(n), out(n) {
        for (std::size_t i = 0; i < n; ++i) radii[i] = 8.0 * static_cast<double>(i + 1) / n;
    }
};

void BM_evaluate_points(benchmark::State& st) {
    FieldFixture f(static_cast<std::size_t>(st.range(0)));
    auto eval = [&](double r) { return psi_total(f.wave, f.history, r, 9.0); };
    for (auto _ : st) {
        kernels::evaluate_points<FieldSample>(f.radii, f.out, eval);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_evaluate_points_serial(benchmark::State& st) {
    FieldFixture f(static_cast<std::size_t>(st.range(0)));
    auto eval = [&](double r) { return psi_total(f.wave, f.history, r, 9.0); };
    for (auto _ : st) {
        kernels::evaluate_points_serial<FieldSample>(f.radii, f.out, eval);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void leapfrog(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = std::sin(1e-3 * j);
        b[j] = std::sin(1e-3 * j + 1e-3);
    }
    for (auto _ : st) {
        if constexpr (Parallel) {
            kernels::leapfrog_interior(a, b, c);
        } else {
            kernels::leapfrog_interior_serial(a, b, c);
        }
        std::swap(a, b);
        std::swap(b, c);
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_leapfrog(benchmark::State& st) { leapfrog<true>(st); }
void BM_leapfrog_serial(benchmark::State& st) { leapfrog<false>(st); }

} // namespace

BENCHMARK(BM_integrate_panels)->Arg(320)->Arg(5120);
BENCHMARK(BM_integrate_panels_serial)->Arg(320)->Arg(5120);
BENCHMARK(BM_evaluate_points)->Arg(200)->Arg(4096);
BENCHMARK(BM_evaluate_points_serial)->Arg(200)->Arg(4096);
BENCHMARK(BM_leapfrog)->Arg(4097)->Arg(65537);
BENCHMARK(BM_leapfrog_serial)->Arg(4097)->Arg(65537);

BENCHMARK_MAIN();
