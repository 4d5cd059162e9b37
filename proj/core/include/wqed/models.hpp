#pragma once

#include <string>
#include <vector>

#include "wqed/basis.hpp"
#include "wqed/matter.hpp"
#include "wqed/sparse.hpp"

namespace wqed {

enum class Gauge { Dipole, Coulomb };

/// Tight-binding cavity array, omega_c = 1.
struct WaveguideSpec {
    double omega_c = 1.0;
    double xi = -1.0 / M_PI;  // hopping, signed
    int n_cavities = 3;       // odd, dipole at the center
    int photon_cutoff = 6;    // max photons per cavity (full builds)

    double band_min() const { return omega_c - 2.0 * std::abs(xi); }
    double band_max() const { return omega_c + 2.0 * std::abs(xi); }
    void validate() const;
};

/// Two-level gap plus per-mode (k, omega_k, g_k) table on k = 2 pi m / N.
struct SpinBosonModel {
    double delta = 1.0;  // Delta' (dipole) or Delta (Coulomb)
    struct Mode {
        double k;
        double omega;
        double g;
    };
    std::vector<Mode> modes;
    Gauge gauge_tag = Gauge::Dipole;
};

/// Discrete mode table: omega_k = omega_c + 2 xi cos(k); dipole-gauge
/// couplings g_k = (g/sqrt(N)) (omega_k/omega_c), Coulomb-gauge flat.
SpinBosonModel spin_boson_modes(const WaveguideSpec& w, double delta, double g,
                                Gauge gauge, int n_modes);

/// Minimal coupling build: [p - q A0 (a0 + a0^dag)]^2 / 2m + V projected on the
/// lowest n_dipole_levels of the bare matter Hamiltonian, photons and hopping,
/// diamagnetic term kept exactly within the truncation.
SparseOperator build_full_coulomb(const WaveguideSpec& w, const DipoleSpec& d,
                                  int n_dipole_levels);

/// Position-space dipole-gauge build: shifted matter eigenbasis plus the
/// x-coupling to cavities -1, 0, +1 with weights (xi, omega_c, xi) * lambda.
SparseOperator build_full_dipole(const WaveguideSpec& w, const DipoleSpec& d,
                                 int n_dipole_levels);

struct PzwBuild {
    SparseOperator op;
    bool cutoff_warning = false;  // displacement amplitude too large for the Fock cutoff
    double dropped_norm = 0.0;
};

/// Two-level Coulomb-gauge Hamiltonian obtained from the truncated PZW
/// transformation: photons + hopping + (Delta'/2)[cos(2g X0) sz + sin(2g X0) sy]
/// - g^2/omega_c, with cos/sin taken by exact spectral calculus of the
/// truncated quadrature X0 = a0 + a0^dag.
PzwBuild build_truncated_coulomb_pzw(const WaveguideSpec& w, double delta_prime,
                                     double g);

/// Position-space two-level chain (sigma_z convention), with or without the
/// counter-rotating terms, on the excitation-capped Hilbert space.
SparseOperator build_spin_boson(const WaveguideSpec& w, double delta, double g,
                                Gauge gauge, bool rwa, int excitation_cutoff = 4);

/// Single-excitation block of the RWA model, dimension N + 1. Basis: qubit
/// excitation first, then one photon per cavity left-to-right. Energies are
/// measured from the zero-excitation vacuum.
SparseOperator spin_boson_single_excitation_block(const WaveguideSpec& w,
                                                  double delta, double g,
                                                  Gauge gauge);

/// Matrix-free check that op commutes with the total excitation number.
double excitation_commutator_defect(const SparseOperator& op,
                                    const CappedBasis& basis, int n_probes = 4);

}  // namespace wqed
