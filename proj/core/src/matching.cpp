#include "wqed/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wqed {

namespace {

// complex lead root of z^2 - 2 a z + 1 = 0 for omega_out; open channels get
// the root whose group velocity points away from the scatterer on the right
// lead, closed ones the |z| < 1 root
struct LeadRoot {
    Complex z;
    bool open;
    double speed;  // |d omega / d k| when open
};

LeadRoot lead_root(const WaveguideSpec& w, double omega_out) {
    const double a = (omega_out - w.omega_c) / (2.0 * w.xi);
    LeadRoot out;
    if (std::abs(a) < 1.0) {
        const double s = w.xi < 0 ? 1.0 : -1.0;  // rightward group velocity
        const double root = std::sqrt(1.0 - a * a);
        out.z = Complex(a, s * root);
        out.open = true;
        out.speed = 2.0 * std::abs(w.xi) * root;
    } else {
        const double sgn = a > 0 ? 1.0 : -1.0;
        out.z = a - sgn * std::sqrt(a * a - 1.0);
        out.open = false;
        out.speed = 0.0;
    }
    return out;
}

}  // namespace

ScattererEigensystem build_scatterer(const WaveguideSpec& w, double delta,
                                     double g, Gauge gauge, bool rwa,
                                     int region_size, int excitation_cutoff,
                                     int n_evanescent) {
    if (region_size < 3 || region_size % 2 == 0)
        throw std::invalid_argument("build_scatterer: region_size must be odd >= 3");
    if (region_size > w.n_cavities - 4)
        throw std::invalid_argument(
            "build_scatterer: region_size must leave at least two lead "
            "cavities per side");
    if (excitation_cutoff < 1)
        throw std::invalid_argument("build_scatterer: excitation_cutoff >= 1");

    WaveguideSpec region = w;
    region.n_cavities = region_size;
    SparseOperator h = build_spin_boson(region, delta, g, gauge, rwa,
                                        excitation_cutoff);
    CappedBasis basis(region_size, std::min(excitation_cutoff,
                                            CappedBasis::kMaxExcitations),
                      true);
    const std::size_t dim = basis.size();

    // diagonalize each parity sector separately so eigenstates carry exact
    // parity labels even under near-degeneracy
    std::vector<std::size_t> idx[2];
    for (std::size_t i = 0; i < dim; ++i)
        idx[basis.state(i).parity()].push_back(i);

    Eigen::MatrixXcd h_dense = Eigen::MatrixXcd(h.compressed());

    std::vector<double> energy;
    std::vector<int> par;
    Eigen::MatrixXcd vectors = Eigen::MatrixXcd::Zero(dim, dim);
    std::size_t col = 0;
    for (int p = 0; p < 2; ++p) {
        const auto& sel = idx[p];
        if (sel.empty()) continue;
        Eigen::MatrixXcd block(sel.size(), sel.size());
        for (std::size_t i = 0; i < sel.size(); ++i)
            for (std::size_t j = 0; j < sel.size(); ++j)
                block(i, j) = h_dense(sel[i], sel[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
        for (std::size_t v = 0; v < sel.size(); ++v) {
            energy.push_back(es.eigenvalues()[v]);
            par.push_back(p);
            for (std::size_t i = 0; i < sel.size(); ++i)
                vectors(sel[i], col) = es.eigenvectors()(i, v);
            ++col;
        }
    }

    // sort ascending by energy
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });

    ScattererEigensystem out;
    out.w = w;
    out.delta = delta;
    out.g = g;
    out.gauge = gauge;
    out.rwa = rwa;
    out.region_size = region_size;
    out.excitation_cutoff = excitation_cutoff;
    out.n_evanescent = n_evanescent;
    out.energies.resize(dim);
    out.parity.resize(dim);
    Eigen::MatrixXcd v_sorted(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out.energies[i] = energy[order[i]];
        out.parity[i] = par[order[i]];
        v_sorted.col(i) = vectors.col(order[i]);
    }

    // edge annihilation operators in the eigenbasis
    auto edge_op = [&](int site) {
        Eigen::SparseMatrix<Complex> m(dim, dim);
        std::vector<Eigen::Triplet<Complex>> trip;
        CappedBasis::State t;
        double amp;
        for (std::size_t i = 0; i < dim; ++i)
            if (basis.annihilate(basis.state(i), site, t, amp))
                trip.emplace_back(basis.index(t), i, amp);
        m.setFromTriplets(trip.begin(), trip.end());
        return Eigen::MatrixXcd(v_sorted.adjoint() * (m * v_sorted));
    };
    out.a_left = edge_op(0);
    out.a_right = edge_op(region_size - 1);

    out.edge_population.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
        out.edge_population[i] = out.a_left.col(i).squaredNorm() +
                                 out.a_right.col(i).squaredNorm();
    out.ground_edge_population = out.edge_population[0];
    if (out.ground_edge_population > 1e-6)
        throw std::invalid_argument(
            "build_scatterer: ground-state photon population at the region "
            "edges is " + std::to_string(out.ground_edge_population) +
            "; increase region_size");
    return out;
}

namespace {

ScatteringResult scatter_once(const ScattererEigensystem& scat,
                              double omega_in, bool from_right) {
    const WaveguideSpec& w = scat.w;
    const double band_lo = w.band_min(), band_hi = w.band_max();
    if (!(omega_in > band_lo && omega_in < band_hi))
        throw std::invalid_argument(
            "scatter_single_photon: omega_in outside the open band");

    // the mirror image of the symmetric construction: swap the lead couplings
    const Eigen::MatrixXcd& a_in = from_right ? scat.a_right : scat.a_left;
    const Eigen::MatrixXcd& a_out = from_right ? scat.a_left : scat.a_right;

    const std::size_t dim = scat.energies.size();
    const double e0 = scat.energies[0];
    const int parity0 = scat.parity[0];
    const double e_total = omega_in + e0;
    const int e = (scat.region_size - 1) / 2;

    // channel set: same-parity states, all open ones plus the next
    // n_evanescent closed ones by ascending energy
    std::vector<int> channels;
    int n_closed = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (scat.parity[i] != parity0) continue;
        double omega_out = e_total - scat.energies[i];
        bool open = std::abs((omega_out - w.omega_c) / (2.0 * w.xi)) < 1.0;
        if (open) {
            channels.push_back(i);
        } else if (n_closed < scat.n_evanescent) {
            channels.push_back(i);
            ++n_closed;
        }
    }
    // opposite-parity states carry the zero-lead-photon coefficients
    std::vector<int> inner;
    for (std::size_t i = 0; i < dim; ++i)
        if (scat.parity[i] != parity0) inner.push_back(i);

    const std::size_t nc = channels.size(), nb = inner.size();
    const std::size_t n = 2 * nc + nb;  // unknowns: r_a, t_a, f_b

    std::vector<LeadRoot> roots(nc);
    int elastic = -1;
    for (std::size_t c = 0; c < nc; ++c) {
        roots[c] = lead_root(w, e_total - scat.energies[channels[c]]);
        if (channels[c] == 0) elastic = c;
    }
    if (elastic < 0)
        throw std::invalid_argument("scatter_single_photon: ground channel lost");
    const Complex z0 = roots[elastic].z;
    const double v_in = roots[elastic].speed;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

    // rows 0..nc-1: left matching  r_a z_a^e - sum_b <a|a_in|b> f_b = -d_a0 z0^-e
    // rows nc..2nc-1: right matching  t_a z_a^e - sum_b <a|a_out|b> f_b = 0
    for (std::size_t c = 0; c < nc; ++c) {
        const Complex ze = std::pow(roots[c].z, e);
        m(c, c) = ze;
        m(nc + c, nc + c) = ze;
        const int al = channels[c];
        for (std::size_t b = 0; b < nb; ++b) {
            m(c, 2 * nc + b) = -a_in(al, inner[b]);
            m(nc + c, 2 * nc + b) = -a_out(al, inner[b]);
        }
    }
    rhs(elastic) = -std::pow(z0, -double(e));

    // rows 2nc..: (E_b - E_total) f_b
    //   + xi sum_a conj(<a|a_in|b>) (d_a0 z0^{-e-1} + r_a z_a^{e+1})
    //   + xi sum_a conj(<a|a_out|b>) t_a z_a^{e+1} = 0
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t row = 2 * nc + b;
        m(row, 2 * nc + b) = scat.energies[inner[b]] - e_total;
        for (std::size_t c = 0; c < nc; ++c) {
            const Complex zp = std::pow(roots[c].z, e + 1);
            const int al = channels[c];
            m(row, c) += w.xi * std::conj(a_in(al, inner[b])) * zp;
            m(row, nc + c) += w.xi * std::conj(a_out(al, inner[b])) * zp;
        }
        rhs(row) = -w.xi * std::conj(a_in(channels[elastic], inner[b])) *
                   std::pow(z0, -double(e + 1));
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    Eigen::VectorXcd x = lu.solve(rhs);
    const double resid = (m * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (!(resid < 1e-8))
        throw NonConvergenceError(
            "scatter_single_photon: singular matching system", resid);

    ScatteringResult out;
    out.omega_in = omega_in;
    out.k_in = std::acos((omega_in - w.omega_c) / (2.0 * w.xi));
    out.condition_estimate = m.cwiseAbs().rowwise().sum().maxCoeff() *
                             lu.inverse().cwiseAbs().rowwise().sum().maxCoeff();

    double flux_t = 0.0, flux_r = 0.0, inel_t = 0.0, inel_r = 0.0;
    out.channels.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        ScatteringChannel& ch = out.channels[c];
        ch.alpha = channels[c];
        ch.omega_out = e_total - scat.energies[channels[c]];
        ch.open = roots[c].open;
        ch.r = x(c);
        ch.t = x(nc + c);
        if (ch.open) {
            ch.k_out = std::acos((ch.omega_out - w.omega_c) / (2.0 * w.xi));
            const double ratio = roots[c].speed / v_in;
            flux_t += ratio * std::norm(ch.t);
            flux_r += ratio * std::norm(ch.r);
            if (int(c) != elastic) {
                inel_t += ratio * std::norm(ch.t);
                inel_r += ratio * std::norm(ch.r);
            }
        } else {
            ch.kappa = -std::log(std::abs(roots[c].z));
        }
    }
    out.t = x(nc + elastic);
    out.r = x(elastic);
    out.transmission = std::norm(out.t);
    out.reflection = std::norm(out.r);
    out.inelastic_transmittance = inel_t;
    out.inelastic_reflectance = inel_r;
    out.inelastic_proxy = 0.5 * (1.0 - out.transmission - out.reflection);
    out.flux_error = std::abs(flux_t + flux_r - 1.0);
    return out;
}

}  // namespace

ScatteringResult scatter_single_photon(const ScattererEigensystem& scat,
                                       double omega_in, bool from_right) {
    try {
        return scatter_once(scat, omega_in, from_right);
    } catch (const NonConvergenceError&) {
        // accidental degeneracy: nudge the frequency once and retry
        return scatter_once(scat, omega_in + 1e-9, from_right);
    }
}

double inelastic_threshold(const ScattererEigensystem& scat,
                           double bound_population_tol) {
    for (std::size_t i = 1; i < scat.energies.size(); ++i)
        if (scat.edge_population[i] < bound_population_tol)
            return scat.energies[i] - scat.energies[0] + scat.w.band_min();
    // no excited state is clearly bound: fall back to the first excited state
    // the photon can actually hand its energy to (same parity as the ground
    // state), which is the exact channel-opening energy of the solver
    for (std::size_t i = 1; i < scat.energies.size(); ++i)
        if (scat.parity[i] == scat.parity[0])
            return scat.energies[i] - scat.energies[0] + scat.w.band_min();
    return std::numeric_limits<double>::infinity();
}

}  // namespace wqed
