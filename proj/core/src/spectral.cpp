#include "wqed/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace wqed {

double spectral_density(const WaveguideSpec& w, double g, Gauge gauge,
                        double omega) {
    const double d = omega - w.omega_c;
    const double disc = 4.0 * w.xi * w.xi - d * d;
    if (disc <= 0.0) return 0.0;
    double num = gauge == Gauge::Dipole
                     ? 2.0 * g * g * (omega * omega) / (w.omega_c * w.omega_c)
                     : 2.0 * g * g;
    return num / std::sqrt(disc);
}

Complex lattice_integral(const WaveguideSpec& w, double energy, int n,
                         Branch branch) {
    const double xi = w.xi;
    const double a = (energy - w.omega_c) / (2.0 * xi);
    const int m = std::abs(n);
    if (std::abs(a) < 1.0) {
        // both roots on the unit circle; the branch picks which one moves in
        const double s = branch == Branch::Retarded ? -1.0 : 1.0;
        const double root = std::sqrt(1.0 - a * a);
        Complex z_in(a, s * (xi > 0 ? 1.0 : -1.0) * root);
        Complex pref =
            Complex(0.0, s) * M_PI / (std::abs(xi) * root);
        return pref * std::pow(z_in, m);
    }
    if (std::abs(a) == 1.0)
        throw std::invalid_argument("lattice_integral: band-edge singularity");
    // outside the band: real, branch-independent
    const double sgn = a > 0 ? 1.0 : -1.0;
    const double z1 = a - sgn * std::sqrt(a * a - 1.0);  // |z1| < 1
    const double denom = 2.0 * xi * sgn * std::sqrt(a * a - 1.0);
    return 2.0 * M_PI * std::pow(z1, m) / denom;
}

Complex lattice_integral_quadrature(const WaveguideSpec& w, double energy,
                                    int n, Branch branch, double eta,
                                    int n_points) {
    if (eta <= 0.0) throw std::invalid_argument("quadrature: eta must be > 0");
    const double s = branch == Branch::Retarded ? 1.0 : -1.0;
    // trapezoid on a periodic integrand is spectrally accurate
    Complex acc = 0.0;
    const double h = 2.0 * M_PI / n_points;
    for (int i = 0; i < n_points; ++i) {
        double k = -M_PI + h * i;
        double omega_k = w.omega_c + 2.0 * w.xi * std::cos(k);
        acc += std::exp(Complex(0.0, k * n)) /
               Complex(energy - omega_k, s * eta);
    }
    return acc * h;
}

Complex self_energy_closed(const WaveguideSpec& w, double g, Gauge gauge,
                           double energy, Branch branch) {
    Complex i0 = lattice_integral(w, energy, 0, branch) / (2.0 * M_PI);
    if (gauge == Gauge::Coulomb) return g * g * i0;
    const double r = g * g / (w.omega_c * w.omega_c);
    return -r * (w.omega_c + energy) + r * energy * energy * i0;
}

Complex self_energy_sum(const SpinBosonModel& m, double energy, Branch branch,
                        double eta) {
    const double s = branch == Branch::Retarded ? 1.0 : -1.0;
    Complex acc = 0.0;
    for (const auto& mode : m.modes)
        acc += mode.g * mode.g / Complex(energy - mode.omega, s * eta);
    return acc;
}

Complex self_energy_assembled(const WaveguideSpec& w, double g, Gauge gauge,
                              double energy, Branch branch) {
    // vertex amplitudes on sites -1, 0, +1 relative to the dipole
    std::vector<std::pair<int, double>> v;
    if (gauge == Gauge::Dipole)
        v = {{-1, w.xi * g / w.omega_c}, {0, g}, {1, w.xi * g / w.omega_c}};
    else
        v = {{0, g}};
    Complex acc = 0.0;
    for (const auto& [n, vn] : v)
        for (const auto& [m, vm] : v)
            acc += vn * vm * lattice_integral(w, energy, n - m, branch);
    return acc / (2.0 * M_PI);
}

}  // namespace wqed
