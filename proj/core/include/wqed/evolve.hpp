#pragma once

#include "wqed/models.hpp"

namespace wqed {

/// Single-photon Gaussian wavepacket riding on the interacting ground state.
struct WavepacketSpec {
    int x_in = 0;        // center cavity index
    double k_in = 0.0;   // carrier momentum, k > 0 moves right for xi < 0
    double theta = 8.0;  // width in cavities

    void validate(const WaveguideSpec& w) const;
};

struct EvolutionResult {
    double t_out = 0.0;
    double carrier_omega = 0.0;
    double transmitted = 0.0;   // background-subtracted spectral weight
    double reflected = 0.0;
    double norm_defect = 0.0;   // | ||psi(t_out)|| - 1 |
    double vacuum_overlap = 0.0;  // packet profile vs vacuum construction
    double wall_population = 0.0;
};

/// Chebyshev time evolution of a_phi^dagger |GS> on the excitation-capped
/// chain; the independent oracle for the matching solver. t_out <= 0 picks
/// the traversal time automatically. Throws when the packet reaches the
/// chain ends (population > 1e-6 at the outermost cavities).
EvolutionResult evolve_wavepacket(const WaveguideSpec& w, double delta,
                                  double g, Gauge gauge, bool rwa,
                                  const WavepacketSpec& wp, double t_out = 0.0,
                                  int excitation_cutoff = 3);

}  // namespace wqed
