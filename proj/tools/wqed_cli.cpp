// Command-line front end: figure-style sweeps and single-shot diagnostics
// over the gauge-aware waveguide model, with stable CSV/JSON output.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wqed/circuit.hpp"
#include "wqed/config.hpp"
#include "wqed/csv.hpp"
#include "wqed/matter.hpp"
#include "wqed/spectral.hpp"
#include "wqed/sweeps.hpp"

namespace {

using namespace wqed;

struct CommonOpts {
    std::string config_path;
    std::string output_path;
    bool json = false;
    // overrides, applied after the config file
    std::string gauge;
    int rwa = -1;          // -1 unset, 0/1 set
    double g = -1.0;       // single-point g override
    double delta = -1.0;   // delta override
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "configuration file");
    cmd->add_option("-o,--output", o.output_path,
                    "output file (default: stdout)");
    cmd->add_flag("--json", o.json, "emit JSON instead of CSV");
    cmd->add_option("--gauge", o.gauge, "dipole | coulomb")
        ->check(CLI::IsMember({"dipole", "coulomb"}));
    cmd->add_flag("--rwa,!--no-rwa", o.rwa, "toggle the rotating-wave terms");
    cmd->add_option("--g", o.g, "fix the coupling to a single value");
    cmd->add_option("--delta", o.delta,
                    "fix the two-level gap, skipping the matter solve");
}

RunConfig load(const CommonOpts& o) {
    RunConfig c;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path, std::ios::binary);
        if (!in)
            throw std::invalid_argument("config: cannot open '" +
                                        o.config_path + "'");
        std::ostringstream body;
        body << in.rdbuf();
        c = load_config(body.str());
    }
    if (!o.gauge.empty()) c.plan.gauge = gauge_from_string(o.gauge);
    if (o.rwa >= 0) c.plan.rwa = o.rwa != 0;
    if (o.g >= 0) c.plan.g_axis = {o.g, o.g, 1};
    if (o.delta >= 0) c.plan.delta_override = o.delta;
    return c;
}

void emit(const CommonOpts& o, const std::string& body) {
    if (o.output_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(o.output_path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("output: cannot open '" + o.output_path +
                                    "'");
    out << body;
}

void emit_table(const CommonOpts& o, const Table& t) {
    emit(o, o.json ? to_json(t) : to_csv(t));
}

Table sweep_with(const RunConfig& c, SweepMethod m) {
    SweepPlan plan = c.plan;
    plan.method = m;
    return run_sweep(plan);
}

void cmd_gap(const CommonOpts& o) {
    RunConfig c = load(o);
    c.validate();
    Table t;
    t.schema = "gap/1";
    t.columns = {"g", "lambda", "delta_prime", "dipole_elem", "iterations"};
    t.provenance = {{"dipole.beta", format_float(c.plan.dipole.beta)},
                    {"dipole.e_d", format_float(c.plan.dipole.e_d)},
                    {"dipole.grid_points",
                     std::to_string(c.plan.dipole.grid_points)}};
    for (const GapPoint& p :
         renormalized_gap(c.plan.dipole, c.plan.g_axis.points()))
        t.rows.push_back({format_float(p.g), format_float(p.lambda),
                          format_float(p.delta_prime),
                          format_float(p.dipole_elem),
                          std::to_string(p.iterations)});
    emit_table(o, t);
}

double resolve_delta(const RunConfig& c, double g) {
    if (c.plan.delta_override > 0) return c.plan.delta_override;
    if (c.plan.gauge == Gauge::Dipole)
        return invert_coupling(c.plan.dipole, g).delta_prime;
    return solve_dipole(c.plan.dipole, false).gap();
}

void cmd_self_energy(const CommonOpts& o, bool density_only) {
    RunConfig c = load(o);
    c.validate();
    double g = c.plan.g_axis.min;
    Table t;
    t.schema = density_only ? "spectral-density/1" : "self-energy/1";
    t.provenance = {{"g", format_float(g)},
                    {"gauge", to_string(c.plan.gauge)},
                    {"waveguide.xi", format_float(c.plan.waveguide.xi)}};
    if (density_only)
        t.columns = {"omega", "J"};
    else
        t.columns = {"omega", "sigma_re", "sigma_im", "J_half"};
    for (double omega : c.plan.omega_axis.points()) {
        double j = spectral_density(c.plan.waveguide, g, c.plan.gauge, omega);
        if (density_only) {
            t.rows.push_back({format_float(omega), format_float(j)});
        } else {
            Complex s = self_energy_closed(c.plan.waveguide, g, c.plan.gauge,
                                           omega, Branch::Retarded);
            t.rows.push_back({format_float(omega), format_float(s.real()),
                              format_float(s.imag()), format_float(j / 2)});
        }
    }
    emit_table(o, t);
}

void cmd_circuit_map(const CommonOpts& o, bool invert, double omega_r,
                     double xi_r, double c_r) {
    if (invert) {
        CircuitSpec c = model_to_circuit(omega_r, xi_r, c_r);
        RunConfig rc;
        rc.circuit = c;
        if (o.json) {
            emit(o, config_to_json(rc));
        } else {
            std::ostringstream out;
            out << "circuit.c_r = " << format_float(c.c_r) << "\n"
                << "circuit.l_r = " << format_float(c.l_r) << "\n"
                << "circuit.l_c = " << format_float(c.l_c) << "\n";
            emit(o, out.str());
        }
        return;
    }
    RunConfig c = load(o);
    if (!c.has_circuit())
        throw std::invalid_argument(
            "circuit: no circuit block in the config (set circuit.c_r, "
            "circuit.l_r, circuit.l_c)");
    c.circuit.validate();
    CircuitModel m = circuit_to_model(c.circuit, c.circuit_modes);
    Table t;
    t.schema = "circuit-map/1";
    t.provenance = {{"omega_r", format_float(m.omega_r)},
                    {"xi_r", format_float(m.xi_r)},
                    {"l_sigma", format_float(m.l_sigma)},
                    {"flux_shift", format_float(m.flux_shift)}};
    t.columns = {"k", "omega", "g", "omega_normalized", "g_normalized"};
    for (std::size_t i = 0; i < m.k.size(); ++i)
        t.rows.push_back({format_float(m.k[i]), format_float(m.omega[i]),
                          format_float(m.g[i]),
                          format_float(m.omega_normalized[i]),
                          format_float(m.g_normalized[i])});
    emit_table(o, t);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"gauge-aware waveguide QED toolkit"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        CommonOpts opts;
    };
    auto make = [&](const char* name, const char* desc) -> Sub* {
        auto* s = new Sub;  // lives for the duration of main
        s->cmd = app.add_subcommand(name, desc);
        add_common(s->cmd, s->opts);
        return s;
    };

    Sub* spectrum = make("spectrum",
                         "lowest levels: converged vs two-level, both gauges");
    Sub* gap = make("gap", "renormalized two-level gap vs coupling");
    Sub* transmission =
        make("transmission", "closed-form elastic transmission (RWA)");
    Sub* polaron = make("polaron", "polaron gap and resonance vs coupling");
    Sub* self_energy = make("self-energy", "closed-form qubit self-energy");
    Sub* spectral_density =
        make("spectral-density", "coupling spectral density J(omega)");
    Sub* inelastic =
        make("inelastic", "matching-solver elastic + inelastic spectra");
    Sub* circuit_map = make("circuit-map", "circuit elements <-> model table");
    bool invert = false;
    double inv_omega_r = 1.0, inv_xi_r = 0.1, inv_c_r = 1.0;
    circuit_map->cmd->add_flag("--invert", invert,
                               "design inductances from (omega_r, xi_r)");
    circuit_map->cmd->add_option("--omega-r", inv_omega_r,
                                 "target resonator frequency (invert)");
    circuit_map->cmd->add_option("--xi-r", inv_xi_r,
                                 "target hopping (invert)");
    circuit_map->cmd->add_option("--c-r", inv_c_r,
                                 "resonator capacitance (invert)");
    Sub* sweep = make("sweep", "run the sweep plan from the config");
    bool trace = false;
    sweep->cmd->add_flag("--resonance-trace", trace,
                         "emit the per-g transmittance-minimum trace instead");
    Sub* validate = make("validate", "check a config and print its canonical form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (spectrum->cmd->parsed()) {
        RunConfig c = load(spectrum->opts);
        c.validate();
        emit_table(spectrum->opts, sweep_with(c, SweepMethod::Spectrum));
    } else if (gap->cmd->parsed()) {
        cmd_gap(gap->opts);
    } else if (transmission->cmd->parsed()) {
        RunConfig c = load(transmission->opts);
        c.validate();
        emit_table(transmission->opts, sweep_with(c, SweepMethod::ClosedForm));
    } else if (polaron->cmd->parsed()) {
        RunConfig c = load(polaron->opts);
        c.validate();
        emit_table(polaron->opts, sweep_with(c, SweepMethod::Polaron));
    } else if (self_energy->cmd->parsed()) {
        cmd_self_energy(self_energy->opts, false);
    } else if (spectral_density->cmd->parsed()) {
        cmd_self_energy(spectral_density->opts, true);
    } else if (inelastic->cmd->parsed()) {
        RunConfig c = load(inelastic->opts);
        c.validate();
        emit_table(inelastic->opts, sweep_with(c, SweepMethod::Matching));
    } else if (circuit_map->cmd->parsed()) {
        cmd_circuit_map(circuit_map->opts, invert, inv_omega_r, inv_xi_r,
                        inv_c_r);
    } else if (sweep->cmd->parsed()) {
        RunConfig c = load(sweep->opts);
        c.validate();
        std::signal(SIGINT, [](int) { request_sweep_cancel(); });
        std::signal(SIGTERM, [](int) { request_sweep_cancel(); });
        if (trace) {
            emit_table(sweep->opts, resonance_trace(c.plan));
        } else if (sweep->opts.json) {
            emit_table(sweep->opts, run_sweep(c.plan));
        } else {
            emit(sweep->opts, run_sweep_csv(c.plan));  // disk-cached path
        }
    } else if (validate->cmd->parsed()) {
        RunConfig c = load(validate->opts);
        c.validate();
        emit(validate->opts, validate->opts.json ? config_to_json(c)
                                                 : dump_config(c));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: kind=non_convergence message=" << e.what()
                  << " residual=" << e.residual << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: kind=config message=" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: kind=numerical message=" << e.what() << "\n";
        return 3;
    }
}
