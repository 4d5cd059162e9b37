#pragma once

#include <vector>

#include "wqed/models.hpp"

namespace wqed {

/// Diagonalized scattering region: the dipole plus the region_size central
/// cavities at a total-excitation cutoff, with the boundary data needed to
/// join the region to the semi-infinite leads.
struct ScattererEigensystem {
    WaveguideSpec w;
    double delta = 0.0;
    double g = 0.0;
    Gauge gauge = Gauge::Dipole;
    bool rwa = false;
    int region_size = 5;       // M, odd
    int excitation_cutoff = 4;
    int n_evanescent = 8;      // closed channels retained in the matching

    std::vector<double> energies;        // ascending, energies[0] = E_0
    std::vector<int> parity;             // excitation parity per eigenstate
    std::vector<double> edge_population; // summed edge-photon population
    Eigen::MatrixXcd a_left;             // <alpha| a_leftedge |beta>
    Eigen::MatrixXcd a_right;            // <alpha| a_rightedge |beta>
    double ground_edge_population = 0.0;
};

/// Builds and fully diagonalizes the region-II block, per excitation-parity
/// sector, and extracts the edge-operator matrix elements. Throws when the
/// ground state leaks photons to the region edges (increase region_size).
ScattererEigensystem build_scatterer(const WaveguideSpec& w, double delta,
                                     double g, Gauge gauge, bool rwa,
                                     int region_size = 5,
                                     int excitation_cutoff = 4,
                                     int n_evanescent = 8);

struct ScatteringChannel {
    int alpha = 0;            // eigenstate index in the scatterer
    double omega_out = 0.0;   // omega_in + E_0 - E_alpha
    bool open = false;
    double k_out = 0.0;       // momentum when open
    double kappa = 0.0;       // decay rate -ln|z| when closed
    Complex t;                // right-lead amplitude
    Complex r;                // left-lead amplitude
};

struct ScatteringResult {
    double omega_in = 0.0;
    double k_in = 0.0;
    Complex t;  // elastic
    Complex r;  // elastic
    double transmission = 0.0;           // |t|^2
    double reflection = 0.0;             // |r|^2
    double inelastic_transmittance = 0.0;  // flux in open channels, right lead
    double inelastic_reflectance = 0.0;    // same, left lead
    double inelastic_proxy = 0.0;          // (1 - T - R)/2
    double flux_error = 0.0;
    double condition_estimate = 0.0;  // of the matching matrix
    std::vector<ScatteringChannel> channels;
};

/// Solves the boundary-matching linear system for a photon incoming from the
/// left (or right) lead at omega_in strictly inside the band.
ScatteringResult scatter_single_photon(const ScattererEigensystem& scat,
                                       double omega_in,
                                       bool from_right = false);

/// Energy-conservation threshold for inelastic scattering:
/// E(first excited bound state) - E_0 + lower band edge. Bound states are
/// identified by low edge-photon population; when none is bound the first
/// same-parity excited state (the exact channel-opening energy) is used
/// instead. Returns +inf when neither exists.
double inelastic_threshold(const ScattererEigensystem& scat,
                           double bound_population_tol = 1e-2);

}  // namespace wqed
