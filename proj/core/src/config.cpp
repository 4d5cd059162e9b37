#include "wqed/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "wqed/csv.hpp"

namespace wqed {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": '" + v + "' is not a number");
    }
    if (used != v.size())
        throw std::invalid_argument(key + ": '" + v + "' is not a number");
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long out;
    try {
        out = std::stol(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": '" + v + "' is not an integer");
    }
    if (used != v.size() || out != int(out))
        throw std::invalid_argument(key + ": '" + v + "' is not an integer");
    return int(out);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument(key + ": '" + v + "' is not a boolean");
}

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

std::vector<Field> schema() {
    std::vector<Field> f;
    auto str = [&](const char* key, std::string RunConfig::* m) {
        f.push_back({key, [m](const RunConfig& c) { return c.*m; },
                     [m](RunConfig& c, const std::string& v) { c.*m = v; }});
    };
    auto dbl = [&](const char* key, auto member) {
        std::string k = key;
        f.push_back({key,
                     [member](const RunConfig& c) {
                         return format_float(member(const_cast<RunConfig&>(c)));
                     },
                     [member, k](RunConfig& c, const std::string& v) {
                         member(c) = parse_double(k, v);
                     }});
    };
    auto num = [&](const char* key, auto member) {
        std::string k = key;
        f.push_back({key,
                     [member](const RunConfig& c) {
                         return std::to_string(member(const_cast<RunConfig&>(c)));
                     },
                     [member, k](RunConfig& c, const std::string& v) {
                         member(c) = parse_int(k, v);
                     }});
    };
    auto flag = [&](const char* key, auto member) {
        std::string k = key;
        f.push_back({key,
                     [member](const RunConfig& c) -> std::string {
                         return member(const_cast<RunConfig&>(c)) ? "true"
                                                                  : "false";
                     },
                     [member, k](RunConfig& c, const std::string& v) {
                         member(c) = parse_bool(k, v);
                     }});
    };

    str("schema_version", &RunConfig::schema_version);

    f.push_back({"sweep.method",
                 [](const RunConfig& c) { return to_string(c.plan.method); },
                 [](RunConfig& c, const std::string& v) {
                     c.plan.method = sweep_method_from_string(v);
                 }});
    f.push_back({"sweep.gauge",
                 [](const RunConfig& c) { return to_string(c.plan.gauge); },
                 [](RunConfig& c, const std::string& v) {
                     c.plan.gauge = gauge_from_string(v);
                 }});
    flag("sweep.rwa", [](RunConfig& c) -> bool& { return c.plan.rwa; });
    dbl("sweep.g.min", [](RunConfig& c) -> double& { return c.plan.g_axis.min; });
    dbl("sweep.g.max", [](RunConfig& c) -> double& { return c.plan.g_axis.max; });
    num("sweep.g.count",
        [](RunConfig& c) -> int& { return c.plan.g_axis.count; });
    dbl("sweep.omega.min",
        [](RunConfig& c) -> double& { return c.plan.omega_axis.min; });
    dbl("sweep.omega.max",
        [](RunConfig& c) -> double& { return c.plan.omega_axis.max; });
    num("sweep.omega.count",
        [](RunConfig& c) -> int& { return c.plan.omega_axis.count; });
    dbl("sweep.delta_override",
        [](RunConfig& c) -> double& { return c.plan.delta_override; });
    num("sweep.truncation_levels",
        [](RunConfig& c) -> int& { return c.plan.truncation_levels; });
    num("sweep.spectrum_levels",
        [](RunConfig& c) -> int& { return c.plan.spectrum_levels; });
    num("sweep.full_levels",
        [](RunConfig& c) -> int& { return c.plan.full_levels; });
    num("sweep.region_size",
        [](RunConfig& c) -> int& { return c.plan.region_size; });
    num("sweep.excitation_cutoff",
        [](RunConfig& c) -> int& { return c.plan.excitation_cutoff; });
    num("sweep.n_evanescent",
        [](RunConfig& c) -> int& { return c.plan.n_evanescent; });
    num("sweep.polaron_modes",
        [](RunConfig& c) -> int& { return c.plan.polaron_modes; });
    dbl("sweep.packet_theta",
        [](RunConfig& c) -> double& { return c.plan.packet_theta; });
    f.push_back({"sweep.columns",
                 [](const RunConfig& c) {
                     std::string out;
                     for (const auto& col : c.plan.columns)
                         out += (out.empty() ? "" : ",") + col;
                     return out;
                 },
                 [](RunConfig& c, const std::string& v) {
                     c.plan.columns.clear();
                     std::istringstream s(v);
                     for (std::string col; std::getline(s, col, ',');) {
                         col = trim(col);
                         if (!col.empty()) c.plan.columns.push_back(col);
                     }
                 }});

    dbl("dipole.beta", [](RunConfig& c) -> double& { return c.plan.dipole.beta; });
    dbl("dipole.e_d", [](RunConfig& c) -> double& { return c.plan.dipole.e_d; });
    dbl("dipole.lambda",
        [](RunConfig& c) -> double& { return c.plan.dipole.lambda_c; });
    dbl("dipole.grid_half_width",
        [](RunConfig& c) -> double& { return c.plan.dipole.grid_half_width; });
    num("dipole.grid_points",
        [](RunConfig& c) -> int& { return c.plan.dipole.grid_points; });
    num("dipole.n_levels",
        [](RunConfig& c) -> int& { return c.plan.dipole.n_levels; });
    f.push_back({"dipole.potential",
                 [](const RunConfig& c) -> std::string {
                     return c.plan.dipole.potential == PotentialKind::DoubleWell
                                ? "double_well"
                                : "cosine";
                 },
                 [](RunConfig& c, const std::string& v) {
                     if (v == "double_well")
                         c.plan.dipole.potential = PotentialKind::DoubleWell;
                     else if (v == "cosine")
                         c.plan.dipole.potential = PotentialKind::Cosine;
                     else
                         throw std::invalid_argument(
                             "dipole.potential: unknown value '" + v + "'");
                 }});
    dbl("dipole.e_j", [](RunConfig& c) -> double& { return c.plan.dipole.e_j; });
    dbl("dipole.phi_ext",
        [](RunConfig& c) -> double& { return c.plan.dipole.phi_ext; });

    dbl("waveguide.omega_c",
        [](RunConfig& c) -> double& { return c.plan.waveguide.omega_c; });
    dbl("waveguide.xi",
        [](RunConfig& c) -> double& { return c.plan.waveguide.xi; });
    num("waveguide.n_cavities",
        [](RunConfig& c) -> int& { return c.plan.waveguide.n_cavities; });
    num("waveguide.photon_cutoff",
        [](RunConfig& c) -> int& { return c.plan.waveguide.photon_cutoff; });

    dbl("circuit.c_r", [](RunConfig& c) -> double& { return c.circuit.c_r; });
    dbl("circuit.l_r", [](RunConfig& c) -> double& { return c.circuit.l_r; });
    dbl("circuit.l_c", [](RunConfig& c) -> double& { return c.circuit.l_c; });
    dbl("circuit.c_j", [](RunConfig& c) -> double& { return c.circuit.c_j; });
    dbl("circuit.e_j", [](RunConfig& c) -> double& { return c.circuit.e_j; });
    dbl("circuit.phi_ext",
        [](RunConfig& c) -> double& { return c.circuit.phi_ext; });
    num("circuit.n_modes",
        [](RunConfig& c) -> int& { return c.circuit_modes; });
    return f;
}

}  // namespace

bool RunConfig::has_circuit() const {
    return circuit.c_r != 0 || circuit.l_r != 0 || circuit.l_c != 0 ||
           circuit.c_j != 0 || circuit.e_j != 0;
}

void RunConfig::validate() const {
    if (schema_version != "1")
        throw std::invalid_argument("schema_version: unsupported value '" +
                                    schema_version + "'");
    plan.validate();
    if (has_circuit()) circuit.validate();
}

RunConfig load_config(const std::string& text) {
    RunConfig c;
    const auto fields = schema();
    std::set<std::string> seen;
    std::istringstream in(text);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        auto it = std::find_if(fields.begin(), fields.end(),
                               [&](const Field& f) { return f.key == key; });
        if (it == fields.end())
            throw std::invalid_argument("unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw std::invalid_argument("duplicate key '" + key + "'");
        it->set(c, value);
    }
    return c;
}

std::string dump_config(const RunConfig& c) {
    std::string out;
    for (const auto& f : schema()) out += f.key + " = " + f.get(c) + "\n";
    return out;
}

std::string config_to_json(const RunConfig& c) {
    nlohmann::json j;
    for (const auto& f : schema()) {
        nlohmann::json* node = &j;
        std::string key = f.key;
        std::size_t pos;
        while ((pos = key.find('.')) != std::string::npos) {
            node = &(*node)[key.substr(0, pos)];
            key = key.substr(pos + 1);
        }
        (*node)[key] = f.get(c);
    }
    return j.dump(2) + "\n";
}

}  // namespace wqed
