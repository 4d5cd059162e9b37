#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wqed/sparse.hpp"

namespace wqed {

enum class PotentialKind { DoubleWell, Cosine };

/// One-dimensional dipole on a uniform grid, dimensionless coordinates
/// (hbar = 1, omega_c = 1, z = x/x0).
struct DipoleSpec {
    double beta = 3.8;        // double-well parameter
    double e_d = 63.812;      // dipole energy scale, units of omega_c
    double lambda_c = 0.0;    // lambda = q*A0*x0, the bare coupling knob
    double grid_half_width = 6.0;
    int grid_points = 8192;
    int n_levels = 18;

    PotentialKind potential = PotentialKind::DoubleWell;
    double e_j = 0.0;         // cosine (transmon) well depth, units of omega_c
    double phi_ext = 0.0;     // cosine potential offset

    void validate() const;    // throws std::invalid_argument
};

struct MatterEigensystem {
    std::vector<double> energies;        // ascending, units of omega_c
    Eigen::MatrixXd wavefunctions;       // grid x level, orthonormal under grid measure
    Eigen::MatrixXd x_elems;             // <m|z|n>, real symmetric
    Eigen::MatrixXcd p_elems;            // <m|p_z|n>, imaginary antisymmetric
    bool shifted = false;                // true when the omega_c*lambda^2*z^2 shift is in
    double grid_step = 0.0;
    double boundary_decay = 0.0;         // max |psi| at the grid edges, levels 0..1

    double gap() const { return energies.at(1) - energies.at(0); }
};

/// Lowest spec.n_levels eigenpairs of
///   E_d [p_z^2/2 - beta z^2/2 + z^4/4]  (+ lambda_c^2 z^2 when include_shift)
/// by second-order finite differences on the uniform grid.
MatterEigensystem solve_dipole(const DipoleSpec& spec, bool include_shift);

struct GapPoint {
    double g;            // requested coupling, units of omega_c
    double lambda;       // converged lambda_c
    double delta_prime;  // E1' - E0' at the converged lambda
    double dipole_elem;  // |<1'|z|0'>|
    int iterations;
};

/// For each g, solves g = lambda * |<1'|z|0'>|(lambda) self-consistently and
/// reports the renormalized gap Delta'.
std::vector<GapPoint> renormalized_gap(const DipoleSpec& spec,
                                       const std::vector<double>& g_grid,
                                       double tol = 1e-10, int max_iter = 200);

/// Single g -> lambda inversion (convenience wrapper).
GapPoint invert_coupling(const DipoleSpec& spec, double g, double tol = 1e-10,
                         int max_iter = 200);

}  // namespace wqed
