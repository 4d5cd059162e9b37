#include "wqed/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace wqed {

double CircuitSpec::l_sigma() const { return 1.0 / (1.0 / l_r + 2.0 / l_c); }

void CircuitSpec::validate() const {
    if (!(c_r > 0.0)) throw std::invalid_argument("CircuitSpec: c_r must be > 0");
    if (!(l_r > 0.0)) throw std::invalid_argument("CircuitSpec: l_r must be > 0");
    if (!(l_c > 0.0)) throw std::invalid_argument("CircuitSpec: l_c must be > 0");
    if (c_j < 0.0) throw std::invalid_argument("CircuitSpec: c_j must be >= 0");
}

CircuitModel circuit_to_model(const CircuitSpec& c, int n_modes) {
    c.validate();
    if (n_modes < 3 || n_modes % 2 == 0)
        throw std::invalid_argument("circuit_to_model: n_modes must be odd >= 3");

    CircuitModel m;
    m.l_sigma = c.l_sigma();
    m.omega_r = 1.0 / std::sqrt(m.l_sigma * c.c_r);
    m.xi_r = m.omega_r * m.l_sigma / c.l_c;
    m.flux_shift = 1.0 / (2.0 * m.l_sigma);

    const int half = (n_modes - 1) / 2;
    const double norm = std::sqrt(1.0 / (2.0 * m.l_sigma * m.omega_r * n_modes));
    for (int i = -half; i <= half; ++i) {
        double k = 2.0 * M_PI * i / n_modes;
        double omega = m.omega_r + 2.0 * m.xi_r * std::cos(k);
        m.k.push_back(k);
        m.omega.push_back(omega);
        m.g.push_back(norm * omega);
        m.omega_normalized.push_back(omega / m.omega_r);
        m.g_normalized.push_back(norm * omega / m.omega_r);
    }
    return m;
}

CircuitSpec model_to_circuit(double omega_r, double xi_r, double c_r) {
    if (!(omega_r > 0.0) || !(c_r > 0.0) || !(xi_r > 0.0))
        throw std::invalid_argument("model_to_circuit: omega_r, xi_r, c_r must be > 0");
    if (!(xi_r < omega_r / 2.0))
        throw std::invalid_argument(
            "model_to_circuit: infeasible, xi_r must be below omega_r/2");

    CircuitSpec c;
    c.c_r = c_r;
    const double l_sigma = 1.0 / (omega_r * omega_r * c_r);
    c.l_c = omega_r * l_sigma / xi_r;
    const double inv_l_r = 1.0 / l_sigma - 2.0 / c.l_c;
    if (!(inv_l_r > 0.0))
        throw std::invalid_argument("model_to_circuit: infeasible, L_r <= 0");
    c.l_r = 1.0 / inv_l_r;
    return c;
}

}  // namespace wqed
