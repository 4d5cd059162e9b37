#include "wqed/matter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace wqed {

void DipoleSpec::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("DipoleSpec: beta must be > 0");
    if (!(e_d > 0.0)) throw std::invalid_argument("DipoleSpec: e_d must be > 0");
    if (grid_points < 64)
        throw std::invalid_argument("DipoleSpec: grid_points must be >= 64");
    if (!(grid_half_width > 0.0))
        throw std::invalid_argument("DipoleSpec: grid_half_width must be > 0");
    if (n_levels < 2)
        throw std::invalid_argument("DipoleSpec: n_levels must be >= 2");
    if (potential == PotentialKind::Cosine && !(e_j > 0.0))
        throw std::invalid_argument("DipoleSpec: cosine potential needs e_j > 0");
}

namespace {

double potential_value(const DipoleSpec& s, double z) {
    if (s.potential == PotentialKind::Cosine)
        return -s.e_j * std::cos(z - s.phi_ext);
    return s.e_d * (-0.5 * s.beta * z * z + 0.25 * z * z * z * z);
}

}  // namespace

MatterEigensystem solve_dipole(const DipoleSpec& spec, bool include_shift) {
    spec.validate();
    const int n = spec.grid_points;
    const int nl = spec.n_levels;
    const double h = 2.0 * spec.grid_half_width / (n + 1);  // hard-wall grid
    const double kin = spec.e_d / (2.0 * h * h);

    // tridiagonal H: diag = 2*kin + V(z_i) (+ shift), offdiag = -kin
    std::vector<double> diag(n), offd(n - 1, -kin), z(n);
    for (int i = 0; i < n; ++i) {
        z[i] = -spec.grid_half_width + h * (i + 1);
        diag[i] = 2.0 * kin + potential_value(spec, z[i]);
        if (include_shift) diag[i] += spec.lambda_c * spec.lambda_c * z[i] * z[i];
    }

    std::vector<double> w(n);
    Eigen::MatrixXd vecs(n, nl);
    std::vector<lapack_int> isuppz(2 * std::max(1, nl));
    lapack_int m = 0;
    lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), offd.data(), 0.0, 0.0, 1, nl,
        0.0, &m, w.data(), vecs.data(), n, isuppz.data());
    if (info != 0 || m < nl)
        throw NonConvergenceError("solve_dipole: dstevr failed, info=" +
                                      std::to_string(info),
                                  static_cast<double>(info));

    MatterEigensystem out;
    out.shifted = include_shift;
    out.grid_step = h;
    out.energies.assign(w.begin(), w.begin() + nl);

    // grid-measure normalization: sum psi^2 * h = 1
    out.wavefunctions = vecs / std::sqrt(h);

    // The grid is symmetric about z = 0. For symmetric potentials, project each
    // eigenvector onto its dominant parity to pin the selection rules.
    const bool symmetric = spec.potential == PotentialKind::DoubleWell ||
                           spec.phi_ext == 0.0;
    if (symmetric) {
        for (int c = 0; c < nl; ++c) {
            Eigen::VectorXd psi = out.wavefunctions.col(c);
            Eigen::VectorXd even(n), odd(n);
            for (int i = 0; i < n; ++i) {
                even[i] = 0.5 * (psi[i] + psi[n - 1 - i]);
                odd[i] = 0.5 * (psi[i] - psi[n - 1 - i]);
            }
            Eigen::VectorXd& keep = even.norm() >= odd.norm() ? even : odd;
            out.wavefunctions.col(c) = keep / (keep.norm() * std::sqrt(h));
        }
    }

    out.boundary_decay = std::max(std::max(std::abs(out.wavefunctions(0, 0)),
                                           std::abs(out.wavefunctions(n - 1, 0))),
                                  std::max(std::abs(out.wavefunctions(0, 1)),
                                           std::abs(out.wavefunctions(n - 1, 1))));
    if (out.boundary_decay > 1e-10)
        throw std::invalid_argument(
            "solve_dipole: eigenfunction does not decay at the grid boundary "
            "(|psi_edge| = " +
            std::to_string(out.boundary_decay) + "); enlarge grid_half_width");

    // <m|z|n> under the grid measure
    Eigen::VectorXd zv = Eigen::Map<Eigen::VectorXd>(z.data(), n);
    out.x_elems = h * out.wavefunctions.transpose() *
                  zv.asDiagonal() * out.wavefunctions;

    // <m|p_z|n> with the central difference paired to the FD2 kinetic term:
    // [z, -D2/2] = D_central exactly on the grid, so the discrete analogue of
    // <m|p|n> = i (E_m - E_n)/E_d <m|z|n> holds to rounding.
    Eigen::MatrixXd dpsi = Eigen::MatrixXd::Zero(n, nl);
    for (int c = 0; c < nl; ++c) {
        for (int i = 0; i < n; ++i) {
            double up = (i + 1 < n) ? out.wavefunctions(i + 1, c) : 0.0;
            double dn = (i > 0) ? out.wavefunctions(i - 1, c) : 0.0;
            dpsi(i, c) = (up - dn) / (2.0 * h);
        }
    }
    Eigen::MatrixXd pd = h * out.wavefunctions.transpose() * dpsi;
    out.p_elems = Complex(0.0, -1.0) * pd.cast<Complex>();
    return out;
}

GapPoint invert_coupling(const DipoleSpec& spec, double g, double tol,
                         int max_iter) {
    if (g < 0.0) throw std::invalid_argument("invert_coupling: g must be >= 0");
    DipoleSpec s = spec;
    GapPoint pt;
    pt.g = g;
    if (g == 0.0) {
        s.lambda_c = 0.0;
        auto eig = solve_dipole(s, false);
        pt.lambda = 0.0;
        pt.delta_prime = eig.gap();
        pt.dipole_elem = std::abs(eig.x_elems(0, 1));
        pt.iterations = 1;
        return pt;
    }
    // damped fixed point lambda <- g / |<1'|z|0'>|(lambda)
    auto bare = solve_dipole(s, false);
    double lambda = g / std::abs(bare.x_elems(0, 1));
    double elem = 0.0, delta_prime = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        s.lambda_c = lambda;
        auto eig = solve_dipole(s, true);
        elem = std::abs(eig.x_elems(0, 1));
        delta_prime = eig.gap();
        double next = 0.5 * (lambda + g / elem);
        double change = std::abs(next - lambda);
        lambda = next;
        if (change < tol) {
            pt.lambda = lambda;
            pt.delta_prime = delta_prime;
            pt.dipole_elem = elem;
            pt.iterations = it;
            return pt;
        }
    }
    throw NonConvergenceError("invert_coupling: fixed point not converged",
                              std::abs(lambda * elem - g));
}

std::vector<GapPoint> renormalized_gap(const DipoleSpec& spec,
                                       const std::vector<double>& g_grid,
                                       double tol, int max_iter) {
    std::vector<GapPoint> out;
    out.reserve(g_grid.size());
    for (double g : g_grid) out.push_back(invert_coupling(spec, g, tol, max_iter));
    return out;
}

}  // namespace wqed
