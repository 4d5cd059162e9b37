#pragma once

#include "wqed/models.hpp"

namespace wqed {

struct TransmissionPoint {
    double omega = 0.0;
    Complex t;
    Complex r;
    double transmission = 0.0;  // |t|^2
    double reflection = 0.0;    // |r|^2
    double flux_defect = 0.0;   // |T + R - 1|
};

/// Elastic single-photon transmission through the dipole within the RWA,
/// closed form. Throws outside the open band.
TransmissionPoint transmission_rwa(const WaveguideSpec& w, double delta,
                                   double g, Gauge gauge, double omega);

/// Frequency of perfect reflection (t = 0). In the Coulomb gauge this is the
/// bare gap; in the dipole gauge it is pulled below it by the coupling.
double resonance_rwa(const WaveguideSpec& w, double delta, double g,
                     Gauge gauge);

}  // namespace wqed
