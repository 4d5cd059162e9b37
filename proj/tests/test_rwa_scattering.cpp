#include <doctest.h>

#include <cmath>

#include "wqed/rwa_scattering.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;

namespace {
const WaveguideSpec w;
}

TEST_CASE("zero coupling is fully transparent") {
    for (double omega : {0.5, 1.0, 1.5}) {
        TransmissionPoint p = transmission_rwa(w, 1.0, 0.0, Gauge::Dipole, omega);
        CHECK(p.transmission == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(p.r) < 1e-14);
    }
}

TEST_CASE("unitarity and the r = t - 1 constraint") {
    for (Gauge gauge : {Gauge::Dipole, Gauge::Coulomb})
        for (double g : {0.1, 0.3})
            for (double omega : {0.45, 0.8, 1.0, 1.2, 1.55}) {
                TransmissionPoint p = transmission_rwa(w, 1.0, g, gauge, omega);
                CHECK(p.flux_defect < 1e-12);
                CHECK(std::abs(p.r - (p.t - 1.0)) < 1e-14);
            }
}

TEST_CASE("transmission amplitude is built from the self-energy") {
    // Oracle: recompute t from the independently tested self-energy module.
    for (Gauge gauge : {Gauge::Dipole, Gauge::Coulomb})
        for (double omega : {0.6, 0.95, 1.3}) {
            double g = 0.2, delta = 1.0;
            Complex sigma = self_energy_closed(w, g, gauge, omega,
                                               Branch::Retarded);
            Complex expected = (omega - delta - sigma.real()) /
                               (omega - delta - sigma);
            TransmissionPoint p = transmission_rwa(w, delta, g, gauge, omega);
            CHECK(std::abs(p.t - expected) < 1e-13);
        }
}

TEST_CASE("perfect reflection at the resonance frequency") {
    for (Gauge gauge : {Gauge::Dipole, Gauge::Coulomb}) {
        double res = resonance_rwa(w, 1.0, 0.25, gauge);
        TransmissionPoint p = transmission_rwa(w, 1.0, 0.25, gauge, res);
        CHECK(p.transmission < 1e-20);
        CHECK(std::abs(p.r + 1.0) < 1e-10);
    }
}

TEST_CASE("the dipole-gauge resonance is red-shifted, the Coulomb one is not") {
    double rd = resonance_rwa(w, 1.0, 0.3, Gauge::Dipole);
    double rc = resonance_rwa(w, 1.0, 0.3, Gauge::Coulomb);
    CHECK(rc == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rd < 1.0);
    // closed form omega_res = omega_c (Delta omega_c - g^2) / (omega_c^2 + g^2)
    CHECK(rd == doctest::Approx((1.0 - 0.09) / (1.0 + 0.09)).epsilon(1e-12));
}

TEST_CASE("out-of-band frequencies are rejected") {
    CHECK_THROWS_AS(transmission_rwa(w, 1.0, 0.1, Gauge::Dipole, 0.2),
                    std::invalid_argument);
}
