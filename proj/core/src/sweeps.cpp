#include "wqed/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wqed/evolve.hpp"
#include "wqed/matching.hpp"
#include "wqed/polaron.hpp"
#include "wqed/rwa_scattering.hpp"
#include "wqed/sparse.hpp"

namespace wqed {

std::string to_string(SweepMethod m) {
    switch (m) {
        case SweepMethod::ClosedForm: return "closed_form";
        case SweepMethod::Matching: return "matching";
        case SweepMethod::Polaron: return "polaron";
        case SweepMethod::Spectrum: return "spectrum";
        case SweepMethod::Evolve: return "evolve";
    }
    throw std::invalid_argument("unknown sweep method");
}

SweepMethod sweep_method_from_string(const std::string& s) {
    if (s == "closed_form") return SweepMethod::ClosedForm;
    if (s == "matching") return SweepMethod::Matching;
    if (s == "polaron") return SweepMethod::Polaron;
    if (s == "spectrum") return SweepMethod::Spectrum;
    if (s == "evolve") return SweepMethod::Evolve;
    throw std::invalid_argument("sweep.method: unknown value '" + s + "'");
}

std::string to_string(Gauge g) {
    return g == Gauge::Dipole ? "dipole" : "coulomb";
}

Gauge gauge_from_string(const std::string& s) {
    if (s == "dipole") return Gauge::Dipole;
    if (s == "coulomb") return Gauge::Coulomb;
    throw std::invalid_argument("gauge: unknown value '" + s + "'");
}

std::vector<double> GridAxis::points() const {
    std::vector<double> p(count);
    for (int i = 0; i < count; ++i)
        p[i] = count == 1 ? min : min + (max - min) * i / (count - 1);
    return p;
}

void GridAxis::validate(const char* name) const {
    if (count < 1)
        throw std::invalid_argument(std::string(name) + ".count must be >= 1");
    if (count > 1 && !(min < max))
        throw std::invalid_argument(std::string(name) +
                                    ": min < max required for count > 1");
    if (!std::isfinite(min) || !std::isfinite(max))
        throw std::invalid_argument(std::string(name) + ": non-finite bound");
}

std::vector<std::string> columns_for(SweepMethod method) {
    switch (method) {
        case SweepMethod::ClosedForm:
            return {"g", "lambda", "delta", "omega", "t_re", "t_im",
                    "r_re", "r_im", "T", "R", "flux_error", "error"};
        case SweepMethod::Matching:
            return {"g", "lambda", "delta", "omega", "T", "R",
                    "inelastic_t", "inelastic_r", "inelastic_proxy",
                    "threshold", "flux_error", "condition", "error"};
        case SweepMethod::Polaron:
            return {"g", "lambda", "delta", "delta_r", "omega_res", "in_band",
                    "iterations", "residual", "error"};
        case SweepMethod::Spectrum:
            return {"g", "lambda", "level_index", "E_full", "E_trunc_dipole",
                    "E_trunc_coulomb", "cutoff_shift", "error"};
        case SweepMethod::Evolve:
            return {"g", "lambda", "delta", "omega", "k_in", "T", "R",
                    "norm_defect", "error"};
    }
    throw std::invalid_argument("unknown sweep method");
}

void SweepPlan::validate() const {
    g_axis.validate("sweep.g");
    omega_axis.validate("sweep.omega");
    dipole.validate();
    waveguide.validate();
    if (g_axis.min < 0)
        throw std::invalid_argument("sweep.g.min must be >= 0");
    if (truncation_levels < 2)
        throw std::invalid_argument("sweep.truncation_levels must be >= 2");
    if (spectrum_levels < 1)
        throw std::invalid_argument("sweep.spectrum_levels must be >= 1");
    if (full_levels < truncation_levels)
        throw std::invalid_argument(
            "sweep.full_levels must be >= sweep.truncation_levels");
    if (region_size < 3 || region_size % 2 == 0)
        throw std::invalid_argument("sweep.region_size must be odd and >= 3");
    if (excitation_cutoff < 1)
        throw std::invalid_argument("sweep.excitation_cutoff must be >= 1");
    if (n_evanescent < 0)
        throw std::invalid_argument("sweep.n_evanescent must be >= 0");
    if (polaron_modes < 3)
        throw std::invalid_argument("sweep.polaron_modes must be >= 3");
    if (packet_theta < 4.0)
        throw std::invalid_argument("sweep.packet_theta must be >= 4");
    if (delta_override < 0)
        throw std::invalid_argument("sweep.delta_override must be >= 0");
    const auto known = columns_for(method);
    for (const auto& c : columns)
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw std::invalid_argument("sweep.columns: '" + c +
                                        "' is not a " + to_string(method) +
                                        " column");
}

std::string SweepPlan::canonical() const {
    std::ostringstream s;
    auto put = [&](const char* key, const std::string& value) {
        s << key << '=' << value << '\n';
    };
    auto putf = [&](const char* key, double v) { put(key, format_float(v)); };
    auto puti = [&](const char* key, long v) { put(key, std::to_string(v)); };
    put("method", to_string(method));
    put("gauge", to_string(gauge));
    puti("rwa", rwa);
    putf("g.min", g_axis.min);
    putf("g.max", g_axis.max);
    puti("g.count", g_axis.count);
    putf("omega.min", omega_axis.min);
    putf("omega.max", omega_axis.max);
    puti("omega.count", omega_axis.count);
    putf("dipole.beta", dipole.beta);
    putf("dipole.e_d", dipole.e_d);
    putf("dipole.grid_half_width", dipole.grid_half_width);
    puti("dipole.grid_points", dipole.grid_points);
    puti("dipole.n_levels", dipole.n_levels);
    put("dipole.potential",
        dipole.potential == PotentialKind::DoubleWell ? "double_well" : "cosine");
    putf("dipole.e_j", dipole.e_j);
    putf("dipole.phi_ext", dipole.phi_ext);
    putf("waveguide.omega_c", waveguide.omega_c);
    putf("waveguide.xi", waveguide.xi);
    puti("waveguide.n_cavities", waveguide.n_cavities);
    puti("waveguide.photon_cutoff", waveguide.photon_cutoff);
    putf("delta_override", delta_override);
    puti("truncation_levels", truncation_levels);
    puti("spectrum_levels", spectrum_levels);
    puti("full_levels", full_levels);
    puti("region_size", region_size);
    puti("excitation_cutoff", excitation_cutoff);
    puti("n_evanescent", n_evanescent);
    puti("polaron_modes", polaron_modes);
    putf("packet_theta", packet_theta);
    std::string cols;
    for (const auto& c : columns) cols += (cols.empty() ? "" : ",") + c;
    put("columns", cols);
    return s.str();
}

std::uint64_t SweepPlan::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

std::atomic<bool> g_cancel{false};

constexpr const char* kSchemaVersion = "1";

struct RowBuffer {
    std::vector<std::string> names;   // full method column list
    std::vector<std::string> values;  // one row, aligned with names

    explicit RowBuffer(SweepMethod m) : names(columns_for(m)) { reset(); }
    void reset() { values.assign(names.size(), "nan"); }
    void set(const std::string& name, double v) { cell(name) = format_float(v); }
    void set(const std::string& name, const std::string& v) { cell(name) = v; }
    std::string& cell(const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw std::logic_error("internal: unknown column " + name);
        return values[std::size_t(it - names.begin())];
    }
};

std::string error_code(const std::exception& e) {
    if (dynamic_cast<const NonConvergenceError*>(&e)) return "non_convergence";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_input";
    return "error";
}

/// Per-g two-level parameters: lambda and the gauge-appropriate gap.
struct PointParams {
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double delta = 0.0;
};

PointParams resolve_point(const SweepPlan& plan, double g) {
    PointParams p;
    if (plan.delta_override > 0) {
        p.delta = plan.delta_override;
        return p;
    }
    if (plan.gauge == Gauge::Dipole) {
        GapPoint gp = invert_coupling(plan.dipole, g);
        p.lambda = gp.lambda;
        p.delta = gp.delta_prime;
    } else {
        MatterEigensystem bare = solve_dipole(plan.dipole, false);
        p.delta = bare.gap();
        double x01 = std::abs(bare.x_elems(0, 1));
        p.lambda = x01 > 0 ? g / (p.delta * x01) : 0.0;
    }
    return p;
}

Table make_table(const SweepPlan& plan, const std::string& name) {
    Table t;
    t.schema = name + "/" + kSchemaVersion;
    std::istringstream c(plan.canonical());
    for (std::string line; std::getline(c, line);) {
        auto eq = line.find('=');
        t.provenance.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return t;
}

void finish_rows(Table& t, const SweepPlan& plan, const RowBuffer& proto,
                 std::vector<std::vector<std::string>>&& raw_rows,
                 int failures, const std::string& first_error) {
    int total = int(raw_rows.size());
    if (!t.truncated && total > 0 && failures * 5 > total)
        throw std::runtime_error(
            "sweep aborted: " + std::to_string(failures) + " of " +
            std::to_string(total) + " points failed; first error: " + first_error);
    const std::vector<std::string>& wanted =
        plan.columns.empty() ? proto.names : plan.columns;
    t.columns = wanted;
    std::vector<std::size_t> sel;
    for (const auto& c : wanted) {
        auto it = std::find(proto.names.begin(), proto.names.end(), c);
        sel.push_back(std::size_t(it - proto.names.begin()));
    }
    for (auto& raw : raw_rows) {
        std::vector<std::string> row;
        row.reserve(sel.size());
        for (std::size_t j : sel) row.push_back(std::move(raw[j]));
        t.rows.push_back(std::move(row));
    }
}

double momentum_for(const WaveguideSpec& w, double omega) {
    double a = (omega - w.omega_c) / (2.0 * w.xi);
    if (std::abs(a) >= 1.0)
        throw std::invalid_argument("omega outside the open band");
    return std::acos(a);  // in (0, pi): rightward group velocity for xi < 0
}

}  // namespace

Table run_sweep(const SweepPlan& plan) {
    plan.validate();
    Table t = make_table(plan, "sweep-" + to_string(plan.method));
    RowBuffer row(plan.method);
    std::vector<std::vector<std::string>> rows;
    int failures = 0;
    std::string first_error;
    auto flag = [&](const std::exception& e) {
        row.set("error", error_code(e));
        ++failures;
        if (first_error.empty()) first_error = e.what();
    };

    for (double g : plan.g_axis.points()) {
        if (g_cancel.load(std::memory_order_relaxed)) {
            t.truncated = true;
            break;
        }
        PointParams pp;
        std::string point_error;
        try {
            pp = resolve_point(plan, g);
        } catch (const std::exception& e) {
            point_error = error_code(e);
            ++failures;
            if (first_error.empty()) first_error = e.what();
        }
        auto start_row = [&] {
            row.reset();
            row.set("g", g);
            row.set("lambda", pp.lambda);
            row.set("error", point_error);
        };

        switch (plan.method) {
            case SweepMethod::ClosedForm: {
                for (double omega : plan.omega_axis.points()) {
                    if (g_cancel.load(std::memory_order_relaxed)) {
                        t.truncated = true;
                        break;
                    }
                    start_row();
                    row.set("omega", omega);
                    if (point_error.empty()) {
                        row.set("delta", pp.delta);
                        try {
                            TransmissionPoint p = transmission_rwa(
                                plan.waveguide, pp.delta, g, plan.gauge, omega);
                            row.set("t_re", p.t.real());
                            row.set("t_im", p.t.imag());
                            row.set("r_re", p.r.real());
                            row.set("r_im", p.r.imag());
                            row.set("T", p.transmission);
                            row.set("R", p.reflection);
                            row.set("flux_error", p.flux_defect);
                        } catch (const std::exception& e) {
                            flag(e);
                        }
                    }
                    rows.push_back(row.values);
                }
                break;
            }
            case SweepMethod::Matching: {
                ScattererEigensystem scat;
                double threshold = 0.0;
                if (point_error.empty()) {
                    try {
                        scat = build_scatterer(plan.waveguide, pp.delta, g,
                                               plan.gauge, plan.rwa,
                                               plan.region_size,
                                               plan.excitation_cutoff,
                                               plan.n_evanescent);
                        threshold = inelastic_threshold(scat);
                    } catch (const std::exception& e) {
                        point_error = error_code(e);
                        ++failures;
                        if (first_error.empty()) first_error = e.what();
                    }
                }
                for (double omega : plan.omega_axis.points()) {
                    if (g_cancel.load(std::memory_order_relaxed)) {
                        t.truncated = true;
                        break;
                    }
                    start_row();
                    row.set("omega", omega);
                    if (point_error.empty()) {
                        row.set("delta", pp.delta);
                        row.set("threshold", threshold);
                        try {
                            ScatteringResult r =
                                scatter_single_photon(scat, omega);
                            row.set("T", r.transmission);
                            row.set("R", r.reflection);
                            row.set("inelastic_t", r.inelastic_transmittance);
                            row.set("inelastic_r", r.inelastic_reflectance);
                            row.set("inelastic_proxy", r.inelastic_proxy);
                            row.set("flux_error", r.flux_error);
                            row.set("condition", r.condition_estimate);
                        } catch (const std::exception& e) {
                            flag(e);
                        }
                    }
                    rows.push_back(row.values);
                }
                break;
            }
            case SweepMethod::Polaron: {
                start_row();
                if (point_error.empty()) {
                    row.set("delta", pp.delta);
                    try {
                        WaveguideSpec wm = plan.waveguide;
                        wm.n_cavities = plan.polaron_modes;
                        SpinBosonModel model = spin_boson_modes(
                            wm, pp.delta, g, plan.gauge, plan.polaron_modes);
                        PolaronSolution sol = solve_polaron(model);
                        PolaronResonance res = polaron_resonance(sol, model);
                        row.set("delta_r", sol.delta_r);
                        row.set("omega_res", res.omega);
                        row.set("in_band", double(res.in_band));
                        row.set("iterations", double(sol.iterations));
                        row.set("residual", sol.residual);
                    } catch (const std::exception& e) {
                        flag(e);
                    }
                }
                rows.push_back(row.values);
                break;
            }
            case SweepMethod::Spectrum: {
                std::vector<double> e_full, e_td, e_tc, e_coarse;
                if (point_error.empty()) {
                    try {
                        DipoleSpec d = plan.dipole;
                        d.lambda_c = pp.lambda;
                        d.n_levels = std::max(d.n_levels, plan.full_levels);
                        int n = plan.spectrum_levels;
                        e_full = lowest_spectrum(
                            build_full_dipole(plan.waveguide, d,
                                              plan.full_levels), n);
                        e_td = lowest_spectrum(
                            build_full_dipole(plan.waveguide, d,
                                              plan.truncation_levels), n);
                        e_tc = lowest_spectrum(
                            build_full_coulomb(plan.waveguide, d,
                                               plan.truncation_levels), n);
                        WaveguideSpec wc = plan.waveguide;
                        wc.photon_cutoff = std::max(1, wc.photon_cutoff - 1);
                        e_coarse = lowest_spectrum(
                            build_full_dipole(wc, d, plan.full_levels), n);
                    } catch (const std::exception& e) {
                        point_error = error_code(e);
                        ++failures;
                        if (first_error.empty()) first_error = e.what();
                    }
                }
                for (int j = 0; j < plan.spectrum_levels; ++j) {
                    start_row();
                    row.set("level_index", double(j));
                    if (point_error.empty()) {
                        row.set("E_full", e_full[j]);
                        row.set("E_trunc_dipole", e_td[j]);
                        row.set("E_trunc_coulomb", e_tc[j]);
                        row.set("cutoff_shift",
                                std::abs(e_full[j] - e_coarse[j]));
                    }
                    rows.push_back(row.values);
                }
                break;
            }
            case SweepMethod::Evolve: {
                const int center = (plan.waveguide.n_cavities - 1) / 2;
                for (double omega : plan.omega_axis.points()) {
                    if (g_cancel.load(std::memory_order_relaxed)) {
                        t.truncated = true;
                        break;
                    }
                    start_row();
                    row.set("omega", omega);
                    if (point_error.empty()) {
                        row.set("delta", pp.delta);
                        try {
                            WavepacketSpec wp;
                            wp.k_in = momentum_for(plan.waveguide, omega);
                            wp.theta = plan.packet_theta;
                            wp.x_in = center - plan.waveguide.n_cavities / 4;
                            wp.validate(plan.waveguide);
                            EvolutionResult r = evolve_wavepacket(
                                plan.waveguide, pp.delta, g, plan.gauge,
                                plan.rwa, wp, 0.0,
                                std::min(plan.excitation_cutoff, 3));
                            row.set("k_in", wp.k_in);
                            row.set("T", r.transmitted);
                            row.set("R", r.reflected);
                            row.set("norm_defect", r.norm_defect);
                        } catch (const std::exception& e) {
                            flag(e);
                        }
                    }
                    rows.push_back(row.values);
                }
                break;
            }
        }
    }
    finish_rows(t, plan, row, std::move(rows), failures, first_error);
    return t;
}

namespace {

/// Golden-section minimization of f on [lo, hi] to absolute tolerance tol.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Table resonance_trace(const SweepPlan& plan) {
    plan.validate();
    Table t = make_table(plan, "resonance-trace");
    t.columns = {"g",           "lambda",      "delta",
                 "omega_min",   "min_defined", "omega_res_rwa",
                 "omega_res_polaron", "delta_r", "error"};
    const double band = plan.waveguide.band_max() - plan.waveguide.band_min();
    const double tol = 1e-6 * band;
    for (double g : plan.g_axis.points()) {
        std::map<std::string, std::string> row;
        for (const auto& c : t.columns) row[c] = "nan";
        row["g"] = format_float(g);
        row["error"] = "";
        try {
            PointParams pp = resolve_point(plan, g);
            row["lambda"] = format_float(pp.lambda);
            row["delta"] = format_float(pp.delta);
            row["omega_res_rwa"] =
                format_float(resonance_rwa(plan.waveguide, pp.delta, g,
                                           plan.gauge));
            WaveguideSpec wm = plan.waveguide;
            wm.n_cavities = plan.polaron_modes;
            SpinBosonModel model = spin_boson_modes(wm, pp.delta, g,
                                                    plan.gauge,
                                                    plan.polaron_modes);
            PolaronSolution sol = solve_polaron(model);
            row["delta_r"] = format_float(sol.delta_r);
            row["omega_res_polaron"] =
                format_float(polaron_resonance(sol, model).omega);

            ScattererEigensystem scat = build_scatterer(
                plan.waveguide, pp.delta, g, plan.gauge, plan.rwa,
                plan.region_size, plan.excitation_cutoff, plan.n_evanescent);
            auto trans = [&](double omega) {
                return scatter_single_photon(scat, omega).transmission;
            };
            auto omegas = plan.omega_axis.points();
            std::vector<double> coarse(omegas.size());
            for (std::size_t i = 0; i < omegas.size(); ++i)
                coarse[i] = trans(omegas[i]);
            auto mn = std::min_element(coarse.begin(), coarse.end());
            auto mx = std::max_element(coarse.begin(), coarse.end());
            if (*mx - *mn < 1e-9) {
                row["min_defined"] = "0";  // flat spectrum: minimum undefined
            } else {
                std::size_t i = std::size_t(mn - coarse.begin());
                double lo = omegas[i > 0 ? i - 1 : i];
                double hi = omegas[std::min(i + 1, omegas.size() - 1)];
                row["min_defined"] = "1";
                row["omega_min"] = format_float(golden_min(trans, lo, hi, tol));
            }
        } catch (const std::exception& e) {
            row["error"] = error_code(e);
        }
        std::vector<std::string> cells;
        for (const auto& c : t.columns) cells.push_back(row[c]);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void request_sweep_cancel() { g_cancel.store(true, std::memory_order_relaxed); }
void reset_sweep_cancel() { g_cancel.store(false, std::memory_order_relaxed); }

std::string run_sweep_csv(const SweepPlan& plan) {
    plan.validate();
    const char* dir = std::getenv("WQED_CACHE_DIR");
    std::filesystem::path cache_file;
    if (dir && *dir) {
        std::ostringstream key;
        key << std::hex << plan.content_hash();
        cache_file = std::filesystem::path(dir) / ("sweep-" + key.str() + ".csv");
        if (std::filesystem::exists(cache_file)) {
            std::ifstream in(cache_file, std::ios::binary);
            std::ostringstream body;
            body << in.rdbuf();
            return body.str();
        }
    }
    Table table = run_sweep(plan);
    std::string csv = to_csv(table);
    if (!cache_file.empty() && !table.truncated) {
        std::filesystem::create_directories(cache_file.parent_path());
        std::filesystem::path tmp = cache_file;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            out << csv;
        }
        std::filesystem::rename(tmp, cache_file);
    }
    return csv;
}

}  // namespace wqed
