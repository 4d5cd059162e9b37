#pragma once

#include "wqed/models.hpp"
#include "wqed/spectral.hpp"

namespace wqed {

/// Converged variational displacements of the polaron transformation.
struct PolaronSolution {
    double delta_r = 0.0;         // renormalized gap
    std::vector<double> f;        // aligned with the model's mode table
    int iterations = 0;
    double residual = 0.0;        // final fixed-point change (delta_r and f)
    double energy_initial = 0.0;  // variational ground-state energy estimate
    double energy_final = 0.0;
};

/// Damped fixed-point iteration of delta_r = delta' exp(-2 sum f_k^2),
/// f_k = g_k / (delta_r + omega_k). Throws NonConvergenceError with the
/// iterate tail when the iteration does not settle.
PolaronSolution solve_polaron(const SpinBosonModel& model);

/// Self-energy of the polaron-frame qubit. The sigma_z scattering term is
/// rank one on the one-excitation photon block, so it resums exactly:
///   Sigma_P(E) = 4 delta_r^2 S(E) / (1 - 2 delta_r S(E)),
///   S(E) = sum_k f_k^2 / (E - omega_k +- i eta).
Complex polaron_self_energy(double energy, const PolaronSolution& sol,
                            const SpinBosonModel& model,
                            Branch branch = Branch::Retarded,
                            double eta = 1e-3);

struct PolaronResonance {
    double omega = 0.0;
    bool in_band = false;
};

/// Root of omega - delta_r - Re Sigma_P(omega) = 0 by bracketed bisection
/// over the interior of the band. No sign change -> in_band = false.
PolaronResonance polaron_resonance(const PolaronSolution& sol,
                                   const SpinBosonModel& model,
                                   double eta = 1e-3);

}  // namespace wqed
