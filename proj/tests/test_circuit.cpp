#include <doctest.h>

#include <cmath>

#include "wqed/circuit.hpp"

using namespace wqed;

namespace {

CircuitSpec reference() {
    CircuitSpec c;
    c.c_r = 0.4;
    c.l_r = 2.0;
    c.l_c = 15.0;
    c.c_j = 1.0;
    c.e_j = 20.0;
    return c;
}

}  // namespace

TEST_CASE("derived frequencies follow the lumped-element formulas") {
    CircuitSpec c = reference();
    CircuitModel m = circuit_to_model(c, 11);
    double l_sigma = 1.0 / (1.0 / c.l_r + 2.0 / c.l_c);
    CHECK(m.l_sigma == doctest::Approx(l_sigma).epsilon(1e-14));
    CHECK(m.omega_r ==
          doctest::Approx(1.0 / std::sqrt(l_sigma * c.c_r)).epsilon(1e-14));
    CHECK(m.xi_r == doctest::Approx(m.omega_r * l_sigma / c.l_c).epsilon(1e-14));
    CHECK(m.flux_shift == doctest::Approx(0.5 / l_sigma).epsilon(1e-14));
}

TEST_CASE("couplings inherit the omega_k profile") {
    CircuitModel m = circuit_to_model(reference(), 31);
    double ratio = m.g.front() / m.omega.front();
    for (std::size_t i = 0; i < m.g.size(); ++i) {
        CHECK(std::abs(m.g[i] / m.omega[i] - ratio) < 1e-12);
        CHECK(m.omega[i] ==
              doctest::Approx(m.omega_r + 2 * m.xi_r * std::cos(m.k[i]))
                  .epsilon(1e-12));
        // normalized table rescales the band to omega_c = 1
        CHECK(m.omega_normalized[i] ==
              doctest::Approx(m.omega[i] / m.omega_r).epsilon(1e-12));
    }
}

TEST_CASE("forward and inverse maps round-trip") {
    CircuitSpec c = reference();
    CircuitModel m = circuit_to_model(c, 7);
    CircuitSpec back = model_to_circuit(m.omega_r, m.xi_r, c.c_r);
    CHECK(std::abs(back.l_r - c.l_r) < 1e-12);
    CHECK(std::abs(back.l_c - c.l_c) < 1e-12);
    CircuitModel m2 = circuit_to_model(back, 7);
    CHECK(std::abs(m2.omega_r - m.omega_r) < 1e-12);
    CHECK(std::abs(m2.xi_r - m.xi_r) < 1e-12);
}

TEST_CASE("the L_c to infinity limit decouples the chain") {
    CircuitSpec c = reference();
    c.l_c = 1e12;
    CircuitModel m = circuit_to_model(c, 7);
    CHECK(std::abs(m.xi_r) < 1e-11);  // no hopping without coupling inductance
    CHECK(m.l_sigma == doctest::Approx(c.l_r).epsilon(1e-10));
    for (std::size_t i = 1; i < m.omega.size(); ++i)
        CHECK(std::abs(m.omega[i] - m.omega[0]) < 1e-10);
}

TEST_CASE("infeasible targets are rejected") {
    CHECK_THROWS_AS(model_to_circuit(1.0, 0.5, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(model_to_circuit(1.0, 0.6, 0.4), std::invalid_argument);
    CircuitSpec bad = reference();
    bad.l_r = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
