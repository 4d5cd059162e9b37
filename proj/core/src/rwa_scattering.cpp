#include "wqed/rwa_scattering.hpp"

#include <cmath>
#include <stdexcept>

#include "wqed/spectral.hpp"

namespace wqed {

TransmissionPoint transmission_rwa(const WaveguideSpec& w, double delta,
                                   double g, Gauge gauge, double omega) {
    const double d = omega - w.omega_c;
    const double disc = 4.0 * w.xi * w.xi - d * d;
    if (disc <= 0.0)
        throw std::invalid_argument("transmission_rwa: omega outside the band");

    // t = (omega - delta - Re Sigma) / (omega - delta - Sigma_ret), r = t - 1,
    // with Im Sigma_ret = -J(omega)/2
    Complex sigma = self_energy_closed(w, g, gauge, omega, Branch::Retarded);
    const double big_d = omega - delta - sigma.real();
    const double gamma = 0.5 * spectral_density(w, g, gauge, omega);

    TransmissionPoint p;
    p.omega = omega;
    // gamma = 0 means the dipole is decoupled at this frequency; the 0/0
    // limit of the formula is full transparency
    p.t = gamma == 0.0 ? Complex(1.0) : big_d / Complex(big_d, gamma);
    p.r = p.t - 1.0;
    p.transmission = std::norm(p.t);
    p.reflection = std::norm(p.r);
    p.flux_defect = std::abs(p.transmission + p.reflection - 1.0);
    return p;
}

double resonance_rwa(const WaveguideSpec& w, double delta, double g,
                     Gauge gauge) {
    if (gauge == Gauge::Coulomb) return delta;
    const double oc = w.omega_c;
    return oc * (delta * oc - g * g) / (oc * oc + g * g);
}

}  // namespace wqed
