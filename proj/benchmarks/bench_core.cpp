#include <benchmark/benchmark.h>

#include "wqed/matching.hpp"
#include "wqed/matter.hpp"
#include "wqed/models.hpp"
#include "wqed/polaron.hpp"
#include "wqed/rwa_scattering.hpp"
#include "wqed/sparse.hpp"
#include "wqed/spectral.hpp"

namespace {

using namespace wqed;

void matter_solve(benchmark::State& state) {
    DipoleSpec spec;
    spec.grid_points = static_cast<int>(state.range(0));
    for (auto _ : state) {
        MatterEigensystem m = solve_dipole(spec, false);
        benchmark::DoNotOptimize(m.energies.data());
    }
}
BENCHMARK(matter_solve)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void coupling_inversion(benchmark::State& state) {
    DipoleSpec spec;
    for (auto _ : state) {
        GapPoint p = invert_coupling(spec, 0.3);
        benchmark::DoNotOptimize(p.lambda);
    }
}
BENCHMARK(coupling_inversion)->Unit(benchmark::kMillisecond);

void self_energy_closed_form(benchmark::State& state) {
    WaveguideSpec w;
    double omega = 0.9;
    for (auto _ : state) {
        Complex s = self_energy_closed(w, 0.2, Gauge::Dipole, omega,
                                       Branch::Retarded);
        benchmark::DoNotOptimize(s);
        omega = 0.7 + std::fmod(omega, 0.6);  // walk the band interior
    }
}
BENCHMARK(self_energy_closed_form);

void transmission_closed_form(benchmark::State& state) {
    WaveguideSpec w;
    double omega = 0.9;
    for (auto _ : state) {
        TransmissionPoint p = transmission_rwa(w, 1.0, 0.2, Gauge::Dipole, omega);
        benchmark::DoNotOptimize(p.t);
        omega = 0.7 + std::fmod(omega, 0.6);
    }
}
BENCHMARK(transmission_closed_form);

void scatterer_build(benchmark::State& state) {
    WaveguideSpec w;
    w.n_cavities = 41;
    const int cutoff = static_cast<int>(state.range(0));
    for (auto _ : state) {
        ScattererEigensystem s =
            build_scatterer(w, 1.0, 0.3, Gauge::Dipole, false, 9, cutoff);
        benchmark::DoNotOptimize(s.energies.data());
    }
}
BENCHMARK(scatterer_build)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void single_photon_matching(benchmark::State& state) {
    WaveguideSpec w;
    w.n_cavities = 41;
    ScattererEigensystem s =
        build_scatterer(w, 1.0, 0.3, Gauge::Dipole, false, 9, 3);
    double omega = 0.9;
    for (auto _ : state) {
        ScatteringResult r = scatter_single_photon(s, omega);
        benchmark::DoNotOptimize(r.t);
        omega = 0.7 + std::fmod(omega, 0.6);
    }
}
BENCHMARK(single_photon_matching)->Unit(benchmark::kMicrosecond);

void polaron_fixed_point(benchmark::State& state) {
    WaveguideSpec w;
    SpinBosonModel model = spin_boson_modes(w, 1.0, 0.3, Gauge::Dipole, 2001);
    for (auto _ : state) {
        PolaronSolution s = solve_polaron(model);
        benchmark::DoNotOptimize(s.delta_r);
    }
}
BENCHMARK(polaron_fixed_point)->Unit(benchmark::kMillisecond);

void full_build_spectrum(benchmark::State& state) {
    WaveguideSpec w;
    w.photon_cutoff = static_cast<int>(state.range(0));
    DipoleSpec d;
    d.lambda_c = invert_coupling(d, 0.3).lambda;
    d.n_levels = 12;
    for (auto _ : state) {
        auto e = lowest_spectrum(build_full_dipole(w, d, 12), 5);
        benchmark::DoNotOptimize(e.data());
    }
}
BENCHMARK(full_build_spectrum)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
