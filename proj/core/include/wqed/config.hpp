#pragma once

#include <string>

#include "wqed/circuit.hpp"
#include "wqed/sweeps.hpp"

namespace wqed {

/// Flat dotted-key configuration mirroring the plan and circuit structures.
/// Text format: one `key = value` per line, `#` comments, no indentation.
struct RunConfig {
    std::string schema_version = "1";
    SweepPlan plan;
    CircuitSpec circuit;
    int circuit_modes = 201;  // mode count for the circuit forward map

    /// Re-checks every physical invariant; the circuit block only when any
    /// of its element values is set.
    void validate() const;
    bool has_circuit() const;
};

/// Parses the text format. Unknown or duplicate keys and malformed values
/// throw std::invalid_argument naming the key. load(dump(c)) == c.
RunConfig load_config(const std::string& text);

/// Canonical serialization: every key, fixed order, 17-digit floats.
std::string dump_config(const RunConfig& c);

/// Nested JSON mirror of the same keys.
std::string config_to_json(const RunConfig& c);

}  // namespace wqed
