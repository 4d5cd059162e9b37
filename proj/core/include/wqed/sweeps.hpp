#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wqed/csv.hpp"
#include "wqed/matter.hpp"
#include "wqed/models.hpp"

namespace wqed {

enum class SweepMethod { ClosedForm, Matching, Polaron, Spectrum, Evolve };

std::string to_string(SweepMethod m);
SweepMethod sweep_method_from_string(const std::string& s);
std::string to_string(Gauge g);
Gauge gauge_from_string(const std::string& s);

/// Uniform closed grid [min, max] with count points (count = 1 -> {min}).
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    std::vector<double> points() const;
    void validate(const char* name) const;  // strictly monotone (min < max or count == 1)
};

/// Everything needed to reproduce one figure-style table deterministically.
struct SweepPlan {
    SweepMethod method = SweepMethod::ClosedForm;
    Gauge gauge = Gauge::Dipole;
    bool rwa = true;

    GridAxis g_axis{0.2, 0.2, 1};
    GridAxis omega_axis{0.65, 1.35, 71};

    DipoleSpec dipole;        // matter parameters; lambda_c is set per g point
    WaveguideSpec waveguide;  // omega_c, xi; n_cavities sizes matching/evolve chains
    double delta_override = 0.0;  // > 0 skips the matter solve and fixes delta

    int truncation_levels = 2;  // matter levels kept in the truncated builds
    int spectrum_levels = 5;    // eigenvalues reported per g (spectrum method)
    int full_levels = 12;       // matter levels for the converged reference

    int region_size = 9;        // matching: M
    int excitation_cutoff = 4;  // matching; evolve uses min(., 3)
    int n_evanescent = 8;
    int polaron_modes = 2001;
    double packet_theta = 8.0;  // evolve: wavepacket width

    std::vector<std::string> columns;  // subset filter; empty keeps all

    void validate() const;
    /// Canonical key-value serialization; the cache key is its FNV-1a hash.
    std::string canonical() const;
    std::uint64_t content_hash() const;
};

/// Full column list the method can emit, including the trailing error column.
std::vector<std::string> columns_for(SweepMethod method);

/// One row per grid point, deterministic order, failed points error-flagged.
/// Throws when more than 20% of the points fail.
Table run_sweep(const SweepPlan& plan);

/// Async-signal-safe cancellation: a sweep in flight stops at the next grid
/// point and returns the completed prefix with the table marked truncated.
void request_sweep_cancel();
void reset_sweep_cancel();

/// Per-g transmittance minimum of the matching solver by coarse scan plus
/// golden-section refinement, with the closed-form RWA and polaron traces
/// attached. A flat spectrum is flagged, not an error.
Table resonance_trace(const SweepPlan& plan);

/// CSV form of run_sweep, cached on disk under $WQED_CACHE_DIR keyed by the
/// plan's content hash. Unset cache dir -> always recompute.
std::string run_sweep_csv(const SweepPlan& plan);

}  // namespace wqed
