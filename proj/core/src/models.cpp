#include "wqed/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace wqed {

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;

constexpr std::size_t kDimCap = 2'000'000;

SpMat to_sparse(const Eigen::MatrixXcd& m) {
    return m.sparseView(1.0, 1e-300);
}

SpMat identity(int n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

// kron chain, factor 0 slowest
SpMat kron_chain(const std::vector<SpMat>& factors) {
    SpMat acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i)
        acc = Eigen::kroneckerProduct(acc, factors[i]).eval();
    return acc;
}

struct ProductSpace {
    int n_matter;
    int n_fock;   // per-cavity local dimension
    int n_cav;

    std::size_t dim() const {
        std::size_t d = n_matter;
        for (int i = 0; i < n_cav; ++i) d *= static_cast<std::size_t>(n_fock);
        return d;
    }

    SpMat lift(const Eigen::MatrixXcd& matter_op,
               const std::vector<std::pair<int, Eigen::MatrixXcd>>& cavity_ops) const {
        std::vector<SpMat> factors;
        factors.push_back(to_sparse(matter_op));
        for (int c = 0; c < n_cav; ++c) {
            bool placed = false;
            for (const auto& [idx, op] : cavity_ops)
                if (idx == c) {
                    factors.push_back(to_sparse(op));
                    placed = true;
                }
            if (!placed) factors.push_back(identity(n_fock));
        }
        return kron_chain(factors);
    }
};

Eigen::MatrixXcd fock_annihilation(int n) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) a(i - 1, i) = std::sqrt(static_cast<double>(i));
    return a;
}

void append_sparse(SparseOperator& op, const SpMat& m) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            op.add(it.row(), it.col(), it.value());
}

// photons + open-chain hopping, lifted over the matter factor
SpMat photon_chain(const ProductSpace& sp, double omega_c, double xi) {
    Eigen::MatrixXcd a = fock_annihilation(sp.n_fock);
    Eigen::MatrixXcd num = (a.adjoint() * a).eval();
    Eigen::MatrixXcd id_m = Eigen::MatrixXcd::Identity(sp.n_matter, sp.n_matter);
    SpMat h(sp.dim(), sp.dim());
    for (int c = 0; c < sp.n_cav; ++c)
        h = h + sp.lift(id_m, {{c, omega_c * num}});
    for (int c = 0; c + 1 < sp.n_cav; ++c) {
        h = h + sp.lift(id_m, {{c, xi * Eigen::MatrixXcd(a.adjoint())}, {c + 1, a}});
        h = h + sp.lift(id_m, {{c, xi * a}, {c + 1, Eigen::MatrixXcd(a.adjoint())}});
    }
    return h;
}

std::string product_tag(const WaveguideSpec& w, int n_levels, const char* kind) {
    return std::string(kind) + ": dipole(" + std::to_string(n_levels) +
           ") x fock(" + std::to_string(w.photon_cutoff + 1) + ")^" +
           std::to_string(w.n_cavities) + ", dipole slowest, cavities left-to-right";
}

}  // namespace

void WaveguideSpec::validate() const {
    if (n_cavities < 3 || n_cavities % 2 == 0)
        throw std::invalid_argument("WaveguideSpec: n_cavities must be odd and >= 3");
    if (xi == 0.0) throw std::invalid_argument("WaveguideSpec: xi must be nonzero");
    if (photon_cutoff < 1)
        throw std::invalid_argument("WaveguideSpec: photon_cutoff must be >= 1");
    if (omega_c != 1.0)
        throw std::invalid_argument("WaveguideSpec: omega_c is fixed to 1");
}

SpinBosonModel spin_boson_modes(const WaveguideSpec& w, double delta, double g,
                                Gauge gauge, int n_modes) {
    if (n_modes < 3 || n_modes % 2 == 0)
        throw std::invalid_argument("spin_boson_modes: n_modes must be odd >= 3");
    SpinBosonModel m;
    m.delta = delta;
    m.gauge_tag = gauge;
    m.modes.reserve(n_modes);
    const int half = (n_modes - 1) / 2;
    for (int i = -half; i <= half; ++i) {
        double k = 2.0 * M_PI * i / n_modes;
        double omega = w.omega_c + 2.0 * w.xi * std::cos(k);
        double gk = gauge == Gauge::Dipole
                        ? g / std::sqrt(double(n_modes)) * (omega / w.omega_c)
                        : g / std::sqrt(double(n_modes));
        m.modes.push_back({k, omega, gk});
    }
    return m;
}

SparseOperator build_full_coulomb(const WaveguideSpec& w, const DipoleSpec& d,
                                  int n_dipole_levels) {
    w.validate();
    if (n_dipole_levels < 2)
        throw std::invalid_argument("build_full_coulomb: need >= 2 dipole levels");
    DipoleSpec ds = d;
    ds.n_levels = std::max(d.n_levels, n_dipole_levels);
    MatterEigensystem eig = solve_dipole(ds, false);

    ProductSpace sp{n_dipole_levels, w.photon_cutoff + 1, w.n_cavities};
    if (sp.dim() > kDimCap)
        throw std::invalid_argument(
            "build_full_coulomb: dimension above cap; use a sector-restricted "
            "or matching-based path");

    const int nl = n_dipole_levels;
    Eigen::MatrixXcd e_m = Eigen::MatrixXcd::Zero(nl, nl);
    for (int i = 0; i < nl; ++i) e_m(i, i) = eig.energies[i];
    Eigen::MatrixXcd p_m = eig.p_elems.topLeftCorner(nl, nl);
    Eigen::MatrixXcd id_m = Eigen::MatrixXcd::Identity(nl, nl);

    Eigen::MatrixXcd a = fock_annihilation(sp.n_fock);
    Eigen::MatrixXcd x0 = a + a.adjoint();
    const int center = (w.n_cavities - 1) / 2;
    const double lam = d.lambda_c;

    SpMat h = photon_chain(sp, w.omega_c, w.xi);
    h = h + sp.lift(e_m, {});
    // cross term -lambda E_d p_z (a0 + a0^dag); p in H is (1/x0) p_z, 1/m = E_d x0^2
    h = h + sp.lift(-lam * d.e_d * p_m, {{center, x0}});
    // diamagnetic term (lambda^2 E_d / 2) (a0 + a0^dag)^2
    h = h + sp.lift(0.5 * lam * lam * d.e_d * id_m,
                    {{center, Eigen::MatrixXcd(x0 * x0)}});

    SparseOperator out;
    out.dim = sp.dim();
    out.basis_tag = product_tag(w, nl, "coulomb-full");
    append_sparse(out, h);
    return out;
}

SparseOperator build_full_dipole(const WaveguideSpec& w, const DipoleSpec& d,
                                 int n_dipole_levels) {
    w.validate();
    if (n_dipole_levels < 2)
        throw std::invalid_argument("build_full_dipole: need >= 2 dipole levels");
    DipoleSpec ds = d;
    ds.n_levels = std::max(d.n_levels, n_dipole_levels);
    MatterEigensystem eig = solve_dipole(ds, true);

    ProductSpace sp{n_dipole_levels, w.photon_cutoff + 1, w.n_cavities};
    if (sp.dim() > kDimCap)
        throw std::invalid_argument(
            "build_full_dipole: dimension above cap; use a sector-restricted "
            "or matching-based path");

    const int nl = n_dipole_levels;
    Eigen::MatrixXcd e_m = Eigen::MatrixXcd::Zero(nl, nl);
    for (int i = 0; i < nl; ++i) e_m(i, i) = eig.energies[i];
    Eigen::MatrixXcd z_m = eig.x_elems.topLeftCorner(nl, nl).cast<Complex>();

    Eigen::MatrixXcd a = fock_annihilation(sp.n_fock);
    Eigen::MatrixXcd dpl = a.adjoint() - a;  // a0^dag - a0, anti-Hermitian
    const int center = (w.n_cavities - 1) / 2;
    const Complex mi(0.0, -1.0);
    const double lam = d.lambda_c;

    SpMat h = photon_chain(sp, w.omega_c, w.xi);
    h = h + sp.lift(e_m, {});
    h = h + sp.lift(mi * w.omega_c * lam * z_m, {{center, dpl}});
    h = h + sp.lift(mi * w.xi * lam * z_m, {{center - 1, dpl}});
    h = h + sp.lift(mi * w.xi * lam * z_m, {{center + 1, dpl}});

    SparseOperator out;
    out.dim = sp.dim();
    out.basis_tag = product_tag(w, nl, "dipole-full");
    append_sparse(out, h);
    return out;
}

PzwBuild build_truncated_coulomb_pzw(const WaveguideSpec& w, double delta_prime,
                                     double g) {
    w.validate();
    if (g < 0.0) throw std::invalid_argument("pzw: g must be >= 0");

    auto trig = [&](int n_fock, Eigen::MatrixXcd& cos_m, Eigen::MatrixXcd& sin_m) {
        Eigen::MatrixXcd a = fock_annihilation(n_fock);
        Eigen::MatrixXd x0 = (a + a.adjoint()).real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x0);
        Eigen::VectorXd th = 2.0 * g / w.omega_c * es.eigenvalues();
        cos_m = (es.eigenvectors() * th.array().cos().matrix().asDiagonal() *
                 es.eigenvectors().transpose())
                    .cast<Complex>();
        sin_m = (es.eigenvectors() * th.array().sin().matrix().asDiagonal() *
                 es.eigenvectors().transpose())
                    .cast<Complex>();
    };

    const int nf = w.photon_cutoff + 1;
    Eigen::MatrixXcd cos_m, sin_m, cos_big, sin_big;
    trig(nf, cos_m, sin_m);
    trig(nf + 8, cos_big, sin_big);
    // only the interior block matters: the corner of the truncated quadrature
    // never converges, but low-lying states do not reach it
    const int core = std::max(2, nf / 2);
    double dropped = std::max(
        (cos_big.topLeftCorner(core, core) - cos_m.topLeftCorner(core, core)).norm(),
        (sin_big.topLeftCorner(core, core) - sin_m.topLeftCorner(core, core)).norm());

    ProductSpace sp{2, nf, w.n_cavities};
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    Eigen::MatrixXcd sy = Eigen::MatrixXcd::Zero(2, 2);
    sy(0, 1) = Complex(0.0, -1.0);
    sy(1, 0) = Complex(0.0, 1.0);
    Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
    const int center = (w.n_cavities - 1) / 2;

    SpMat h = photon_chain(sp, w.omega_c, w.xi);
    h = h + sp.lift(0.5 * delta_prime * sz, {{center, cos_m}});
    h = h + sp.lift(0.5 * delta_prime * sy, {{center, sin_m}});
    h = h + sp.lift(-(g * g / w.omega_c) * id2, {});

    PzwBuild out;
    out.op.dim = sp.dim();
    out.op.basis_tag = product_tag(w, 2, "pzw-truncated-coulomb");
    append_sparse(out.op, h);
    out.dropped_norm = dropped;
    out.cutoff_warning = dropped > 1e-8;
    return out;
}

SparseOperator build_spin_boson(const WaveguideSpec& w, double delta, double g,
                                Gauge gauge, bool rwa, int excitation_cutoff) {
    w.validate();
    if (!(delta > 0.0)) throw std::invalid_argument("build_spin_boson: delta <= 0");
    if (rwa) excitation_cutoff = std::min(excitation_cutoff, CappedBasis::kMaxExcitations);

    const int n = w.n_cavities;
    const int center = (n - 1) / 2;
    CappedBasis basis(n, excitation_cutoff, true);

    // coupling sites and strengths: dipole gauge hits the center and both
    // neighbours (omega-weighted), Coulomb gauge hits only the center
    std::vector<std::pair<int, double>> verts;
    if (gauge == Gauge::Dipole) {
        verts = {{center, g},
                 {center - 1, w.xi * g / w.omega_c},
                 {center + 1, w.xi * g / w.omega_c}};
    } else {
        verts = {{center, g}};
    }

    SparseOperator out;
    out.dim = basis.size();
    out.basis_tag = "spin-boson position chain, N=" + std::to_string(n) +
                    ", cutoff=" + std::to_string(excitation_cutoff) +
                    (rwa ? ", rwa" : ", full") +
                    (gauge == Gauge::Dipole ? ", dipole" : ", coulomb");

    const Complex mi(0.0, -1.0);
    CappedBasis::State t;
    double amp;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& s = basis.state(i);
        double diag = delta * (s.qubit ? 0.5 : -0.5) + w.omega_c * s.n_photons;
        out.add(i, i, diag);

        // hopping over distinct occupied sites
        for (int p = 0; p < s.n_photons; ++p) {
            if (p > 0 && s.sites[p] == s.sites[p - 1]) continue;
            int site = s.sites[p];
            for (int nb : {site - 1, site + 1}) {
                if (nb < 0 || nb >= n) continue;
                CappedBasis::State mid;
                double a1, a2;
                basis.annihilate(s, site, mid, a1);
                basis.create(mid, nb, t, a2);
                long j = basis.index(t);
                if (j >= 0) out.add(j, i, w.xi * a1 * a2);
            }
        }

        // light-matter vertices
        for (const auto& [site, gj] : verts) {
            if (gauge == Gauge::Dipole) {
                // -i gj sigma_x (a^dag - a): restricted to the RWA pair when asked
                if (s.qubit || !rwa) {
                    CappedBasis::State f = CappedBasis::flip_qubit(s);
                    if (basis.create(f, site, t, amp)) {
                        long j = basis.index(t);
                        if (j >= 0) out.add(j, i, mi * gj * amp);
                    }
                }
                if (!s.qubit || !rwa) {
                    CappedBasis::State f = CappedBasis::flip_qubit(s);
                    if (basis.annihilate(f, site, t, amp)) {
                        long j = basis.index(t);
                        if (j >= 0) out.add(j, i, -mi * gj * amp);
                    }
                }
            } else {
                // gj sigma_x (a^dag + a)
                if (s.qubit || !rwa) {
                    CappedBasis::State f = CappedBasis::flip_qubit(s);
                    if (basis.create(f, site, t, amp)) {
                        long j = basis.index(t);
                        if (j >= 0) out.add(j, i, gj * amp);
                    }
                }
                if (!s.qubit || !rwa) {
                    CappedBasis::State f = CappedBasis::flip_qubit(s);
                    if (basis.annihilate(f, site, t, amp)) {
                        long j = basis.index(t);
                        if (j >= 0) out.add(j, i, gj * amp);
                    }
                }
            }
        }
    }
    return out;
}

SparseOperator spin_boson_single_excitation_block(const WaveguideSpec& w,
                                                  double delta, double g,
                                                  Gauge gauge) {
    w.validate();
    const int n = w.n_cavities;
    const int center = (n - 1) / 2;
    SparseOperator out;
    out.dim = n + 1;
    out.basis_tag = "single-excitation block: [qubit, photon 0..N-1]";
    out.add(0, 0, delta);
    for (int c = 0; c < n; ++c) out.add(1 + c, 1 + c, w.omega_c);
    for (int c = 0; c + 1 < n; ++c) {
        out.add(1 + c, 2 + c, w.xi);
        out.add(2 + c, 1 + c, w.xi);
    }
    std::vector<std::pair<int, double>> verts;
    if (gauge == Gauge::Dipole)
        verts = {{center, g},
                 {center - 1, w.xi * g / w.omega_c},
                 {center + 1, w.xi * g / w.omega_c}};
    else
        verts = {{center, g}};
    for (const auto& [site, gj] : verts) {
        Complex v = gauge == Gauge::Dipole ? Complex(0.0, -gj) : Complex(gj, 0.0);
        out.add(1 + site, 0, v);
        out.add(0, 1 + site, std::conj(v));
    }
    return out;
}

double excitation_commutator_defect(const SparseOperator& op,
                                    const CappedBasis& basis, int n_probes) {
    SpMat h = op.compressed();
    Eigen::VectorXd num(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        num[i] = basis.state(i).excitations();

    std::mt19937_64 rng(0xabcdef12u);
    std::normal_distribution<double> dist;
    double worst = 0.0;
    for (int p = 0; p < n_probes; ++p) {
        Eigen::VectorXcd x(basis.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = Complex(dist(rng), dist(rng));
        x.normalize();
        Eigen::VectorXcd hn = h * (num.cast<Complex>().asDiagonal() * x);
        Eigen::VectorXcd nh = num.cast<Complex>().asDiagonal() * (h * x);
        worst = std::max(worst, (hn - nh).norm());
    }
    return worst;
}

}  // namespace wqed
