#include "wqed/polaron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wqed {

namespace {

double variational_energy(const SpinBosonModel& m, double delta_r,
                          const std::vector<double>& f) {
    double e = -0.5 * delta_r;
    for (std::size_t k = 0; k < m.modes.size(); ++k)
        e += m.modes[k].omega * f[k] * f[k] - 2.0 * m.modes[k].g * f[k];
    return e;
}

}  // namespace

PolaronSolution solve_polaron(const SpinBosonModel& model) {
    if (!(model.delta > 0.0))
        throw std::invalid_argument("solve_polaron: delta must be > 0");
    if (model.modes.empty())
        throw std::invalid_argument("solve_polaron: empty mode table");

    const std::size_t nk = model.modes.size();
    const int max_steps = 10000;
    const double damping = 0.5;
    const double tol = 1e-12;

    PolaronSolution sol;
    sol.delta_r = model.delta;
    sol.f.assign(nk, 0.0);
    sol.energy_initial = variational_energy(model, sol.delta_r, sol.f);

    std::vector<double> tail;  // recent delta_r iterates, for the error message
    for (int step = 1; step <= max_steps; ++step) {
        std::vector<double> f_new(nk);
        double s2 = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
            f_new[k] = model.modes[k].g / (sol.delta_r + model.modes[k].omega);
            s2 += f_new[k] * f_new[k];
        }
        double target = model.delta * std::exp(-2.0 * s2);
        double dr_new = (1.0 - damping) * sol.delta_r + damping * target;

        double df = 0.0;
        for (std::size_t k = 0; k < nk; ++k)
            df = std::max(df, std::abs(f_new[k] - sol.f[k]));
        double res = std::max(std::abs(dr_new - sol.delta_r), df);

        sol.delta_r = dr_new;
        sol.f = std::move(f_new);
        sol.iterations = step;
        sol.residual = res;
        tail.push_back(dr_new);
        if (tail.size() > 8) tail.erase(tail.begin());
        if (res < tol) break;
        if (step == max_steps) {
            std::ostringstream msg;
            msg << "solve_polaron: no fixed point after " << max_steps
                << " steps; delta_r tail:";
            for (double v : tail) msg << ' ' << v;
            throw NonConvergenceError(msg.str(), res);
        }
    }
    sol.energy_final = variational_energy(model, sol.delta_r, sol.f);
    return sol;
}

Complex polaron_self_energy(double energy, const PolaronSolution& sol,
                            const SpinBosonModel& model, Branch branch,
                            double eta) {
    if (sol.f.size() != model.modes.size())
        throw std::invalid_argument("polaron_self_energy: solution/model mismatch");
    // Exact elimination of the one-excitation photon block. The sigma_z
    // scattering term is rank one (2 delta_r |f><f| on the photon states), so
    // Sherman-Morrison resums it:
    //   Sigma_P(E) = 4 delta_r^2 S(E) / (1 - 2 delta_r S(E)),
    //   S(E) = sum_k f_k^2 / (E - omega_k +- i eta).
    const double s = branch == Branch::Retarded ? 1.0 : -1.0;
    Complex big_s = 0.0;
    for (std::size_t k = 0; k < model.modes.size(); ++k)
        big_s += sol.f[k] * sol.f[k] /
                 Complex(energy - model.modes[k].omega, s * eta);
    const double dr = sol.delta_r;
    return 4.0 * dr * dr * big_s / (1.0 - 2.0 * dr * big_s);
}

PolaronResonance polaron_resonance(const PolaronSolution& sol,
                                   const SpinBosonModel& model, double eta) {
    double lo = model.modes.front().omega, hi = lo;
    for (const auto& m : model.modes) {
        lo = std::min(lo, m.omega);
        hi = std::max(hi, m.omega);
    }
    const double margin = 1e-3 * (hi - lo);
    lo += margin;
    hi -= margin;

    // Smooth over the discrete-mode poles of S(E): an eta below a few mode
    // spacings leaves resolved wiggles that fake sign changes in the scan.
    const double spacing = (hi - lo) / std::max<std::size_t>(
                               model.modes.size() - 1, 1);
    const double eta_eff = std::max(eta, 4.0 * spacing);

    auto d = [&](double w) {
        return w - sol.delta_r -
               polaron_self_energy(w, sol, model, Branch::Retarded, eta_eff)
                   .real();
    };

    // Coarse scan for brackets, bisect each, keep the root nearest delta_r:
    // the qubit resonance is the branch continuously connected to delta_r at
    // g = 0, while the Sigma_P pole (2 delta_r S = 1) spawns a separate
    // band-edge branch at strong coupling.
    const int n_scan = 2000;
    PolaronResonance out;
    out.omega = sol.delta_r;  // best available estimate when no root exists
    out.in_band = false;
    double best_dist = std::numeric_limits<double>::max();
    double prev_w = lo, prev_d = d(lo);
    for (int i = 1; i <= n_scan; ++i) {
        double w = lo + (hi - lo) * i / n_scan;
        double dv = d(w);
        if (prev_d == 0.0 || prev_d * dv < 0.0) {
            double a = prev_w, b = w;
            for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
                double m = 0.5 * (a + b);
                (d(a) * d(m) <= 0.0 ? b : a) = m;
            }
            const double root = 0.5 * (a + b);
            const double dist = std::abs(root - sol.delta_r);
            if (dist < best_dist) {
                best_dist = dist;
                out.omega = root;
                out.in_band = true;
            }
        }
        prev_w = w;
        prev_d = dv;
    }
    return out;
}

}  // namespace wqed
