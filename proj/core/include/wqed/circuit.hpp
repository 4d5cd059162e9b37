#pragma once

#include <vector>

#include "wqed/models.hpp"

namespace wqed {

/// Lumped-element chain of LC resonators inductively coupled in series, with
/// a junction-based qubit at the center.
struct CircuitSpec {
    double c_r = 0.0;      // resonator capacitance
    double l_r = 0.0;      // resonator inductance
    double l_c = 0.0;      // coupling inductance
    double c_j = 0.0;      // junction capacitance
    double e_j = 0.0;      // Josephson energy
    double phi_ext = 0.0;  // external flux bias (sweet spot 0)

    double l_sigma() const;  // 1/L_sigma = 1/L_r + 2/L_c
    void validate() const;
};

struct CircuitModel {
    double omega_r = 0.0;     // (L_sigma C_r)^{-1/2}
    double xi_r = 0.0;        // omega_r L_sigma / L_c
    double l_sigma = 0.0;
    double flux_shift = 0.0;  // (1/N) sum_k alpha_k = 1/(2 L_sigma)
    std::vector<double> k;
    std::vector<double> omega;      // omega_r + 2 xi_r cos k
    std::vector<double> g;          // sqrt(1/(2 L_sigma omega_r N)) omega_k
    // same table with omega_r scaled to 1 (invertible via omega_r)
    std::vector<double> omega_normalized;
    std::vector<double> g_normalized;
};

/// Forward map from circuit elements to the waveguide-model parameters;
/// couplings inherit the omega_k proportionality of the dipole gauge.
CircuitModel circuit_to_model(const CircuitSpec& c, int n_modes);

/// Inverse design helper: inductances reproducing (omega_r, xi_r) at fixed
/// resonator capacitance. Junction parameters are left to the caller.
/// Throws when the requested hopping is infeasible (would need L_r <= 0).
CircuitSpec model_to_circuit(double omega_r, double xi_r, double c_r);

}  // namespace wqed
