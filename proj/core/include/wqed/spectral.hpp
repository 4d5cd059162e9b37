#pragma once

#include "wqed/models.hpp"
#include "wqed/sparse.hpp"

namespace wqed {

/// Branch of the band Green function. Retarded is the E + i eta limit
/// (Im <= 0 inside the band); Advanced is its conjugate.
enum class Branch { Retarded, Advanced };

/// Coupling spectral density J(omega) = 2 pi sum_k |g_k|^2 delta(omega -
/// omega_k) in the continuum limit. Zero outside the band; diverges at the
/// band edges.
double spectral_density(const WaveguideSpec& w, double g, Gauge gauge,
                        double omega);

/// Closed form of the lattice integral
///   I(E, n) = int_{-pi}^{pi} dk e^{i k n} / (E - omega_k +- i eta),
/// omega_k = omega_c + 2 xi cos k. Real for E outside the band.
Complex lattice_integral(const WaveguideSpec& w, double energy, int n,
                         Branch branch);

/// Same integral by adaptive quadrature with finite eta, used as an oracle
/// for the closed form.
Complex lattice_integral_quadrature(const WaveguideSpec& w, double energy,
                                    int n, Branch branch, double eta,
                                    int n_points = 200001);

/// Single-pole self-energy of the qubit, closed form:
///   dipole:  Sigma(E) = -(g^2/omega_c^2) (omega_c + E) + (g^2 E^2/omega_c^2) I'(E)
///   coulomb: Sigma(E) = g_c^2 I'(E)
/// with I'(E) = I(E, 0) / (2 pi).
Complex self_energy_closed(const WaveguideSpec& w, double g, Gauge gauge,
                           double energy, Branch branch);

/// Discrete-mode self-energy sum_k g_k^2 / (E - omega_k +- i eta).
Complex self_energy_sum(const SpinBosonModel& m, double energy, Branch branch,
                        double eta);

/// Self-energy assembled from the position-space coupling vertices and the
/// n = 0, 1, 2 lattice integrals; must agree with self_energy_closed.
Complex self_energy_assembled(const WaveguideSpec& w, double g, Gauge gauge,
                              double energy, Branch branch);

}  // namespace wqed
