#pragma once

// Circuit <-> JSON:
//
//   {"width": 4,
//    "gates": [{"kind": "Phase", "qubits": [1], "controls": [], "angle": 1.5707963267948966}, ...],
//    "metadata": {"prime": 17, "provenance": "...", "measured": [0, 1, 2, 3]}}
//
// OracleIndicator stores the ancilla in "qubits" and the inputs in
// "controls"; its "table" holds 0/1 entries. PermutationGate's "table" holds
// the image of every input. "prime" is omitted when unknown.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"

namespace qnr {

inline nlohmann::ordered_json to_json(const Gate& g) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(g.kind));
    j["qubits"] = g.qubits;
    j["controls"] = g.controls;
    j["angle"] = g.angle;
    if (g.table) j["table"] = *g.table;
    return j;
}

inline nlohmann::ordered_json to_json(const Circuit& c) {
    nlohmann::ordered_json j;
    j["width"] = c.width();
    j["gates"] = nlohmann::ordered_json::array();
    for (const auto& g : c.gates()) j["gates"].push_back(to_json(g));
    nlohmann::ordered_json meta;
    if (c.metadata().prime) meta["prime"] = *c.metadata().prime;
    meta["provenance"] = c.metadata().provenance;
    meta["measured"] = c.metadata().measured;
    j["metadata"] = std::move(meta);
    return j;
}

inline Gate gate_from_json(const nlohmann::json& j) {
    const auto name = j.at("kind").get<std::string>();
    const auto kind = gate_kind_from_string(name);
    if (!kind) throw UnsupportedGate("unknown gate kind '" + name + "'");
    Gate g{*kind, j.at("qubits").get<std::vector<Qubit>>(), {}, 0.0, nullptr};
    if (j.contains("controls")) g.controls = j.at("controls").get<std::vector<Qubit>>();
    if (j.contains("angle")) g.angle = j.at("angle").get<double>();
    if (j.contains("table")) g.table = std::make_shared<const Table>(j.at("table").get<Table>());
    return g;
}

/// Throws ParseError on schema violations and InvalidArgument when the
/// decoded circuit fails validation.
inline Circuit circuit_from_json(const nlohmann::json& j) {
    Circuit c;
    try {
        if (!j.is_object()) throw ParseError("circuit JSON must be an object");
        CircuitMetadata meta;
        if (j.contains("metadata")) {
            const auto& m = j.at("metadata");
            if (m.contains("prime") && !m.at("prime").is_null()) meta.prime = m.at("prime").get<std::uint64_t>();
            meta.provenance = m.value("provenance", std::string{});
            if (m.contains("measured")) meta.measured = m.at("measured").get<std::vector<Qubit>>();
        }
        c = Circuit(j.at("width").get<unsigned>(), std::move(meta));
        for (const auto& jg : j.at("gates")) c.add(gate_from_json(jg));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("circuit JSON: ") + e.what());
    }
    require_valid(c);
    return c;
}

}  // namespace qnr
