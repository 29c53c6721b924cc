#include "chemotaxis/chemo.hpp"
#include "chemotaxis/hyperbolic.hpp"
#include "chemotaxis/parabolic.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace chemotaxis;

namespace {

const ModelParams kParams{1.0, 2.0, 50.0, 1.0, 1.0, 1.0, 1.0, 1};

struct Setup {
    Grid grid;
    HydroState state;
    CellField phi;

    explicit Setup(std::size_t n)
        : grid(1.0, n), state(grid), phi(CellField::sample(grid, [](double x) { return std::cos(2.0 * std::numbers::pi * x); }))
    {
        state.rho = CellField::sample(grid, [](double x) { return std::max(0.0, 1.0 + std::sin(4.0 * std::numbers::pi * std::abs(x - 0.25))); });
        for (std::size_t i = 0; i < n; ++i) state.mom[i] = 0.1 * state.rho[i] * std::sin(2.0 * std::numbers::pi * grid.center(i));
    }
};

enum class Variant { Reference, Serial, Parallel };

template <Variant V>
void hyperbolic(benchmark::State& st)
{
    const Setup s(static_cast<std::size_t>(st.range(0)));
    const SchemeConfig scheme;
    const double dt = 0.5 * cfl_dt(interface_fluxes(s.state, s.phi, kParams, scheme), s.grid.dx(), scheme);
    for (auto _ : st) {
        HydroState next = V == Variant::Reference ? reference::hyperbolic_step(s.state, s.phi, kParams, dt, scheme)
                          : hyperbolic_step(s.state, s.phi, kParams, dt, scheme,
                                            V == Variant::Serial ? Execution::Serial : Execution::Parallel);
        benchmark::DoNotOptimize(next.rho.vector().data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Variant V>
void bgk(benchmark::State& st)
{
    const Setup s(static_cast<std::size_t>(st.range(0)));
    const BgkParameters b = bgk_parameters(s.state.rho, s.phi, kParams);
    const double dt = parabolic_cfl(b, s.grid.dx(), 0.9);
    for (auto _ : st) {
        CellField next = V == Variant::Reference ? reference::bgk_step(s.state.rho, s.phi, kParams, b, dt)
                         : bgk_step(s.state.rho, s.phi, kParams, b, dt,
                                    V == Variant::Serial ? Execution::Serial : Execution::Parallel);
        benchmark::DoNotOptimize(next.vector().data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void chemo_cn(benchmark::State& st)
{
    const Setup s(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        CellField next = chemo_step_cn(s.phi, s.state.rho, kParams, 1e-3);
        benchmark::DoNotOptimize(next.vector().data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void chemo_cn_solver(benchmark::State& st)
{
    const Setup s(static_cast<std::size_t>(st.range(0)));
    CrankNicolsonSolver solver(s.grid, kParams);
    std::vector<double> phi = s.phi.vector();
    for (auto _ : st) {
        solver.advance(phi, s.state.rho.values(), 1e-3);
        benchmark::DoNotOptimize(phi.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void parabolic_stepper(benchmark::State& st)
{
    const Setup s(static_cast<std::size_t>(st.range(0)));
    ParabolicStepper stepper(s.grid, kParams, 0.95, 0.9, Execution::Serial);
    std::vector<double> rho = s.state.rho.vector(), phi = s.phi.vector();
    for (auto _ : st) {
        benchmark::DoNotOptimize(stepper.step(rho, phi, 1.0));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(hyperbolic<Variant::Reference>)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(hyperbolic<Variant::Serial>)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(hyperbolic<Variant::Parallel>)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(bgk<Variant::Reference>)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(bgk<Variant::Serial>)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(bgk<Variant::Parallel>)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(chemo_cn)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(chemo_cn_solver)->RangeMultiplier(10)->Range(400, 40000);
BENCHMARK(parabolic_stepper)->RangeMultiplier(10)->Range(400, 40000);

BENCHMARK_MAIN();
