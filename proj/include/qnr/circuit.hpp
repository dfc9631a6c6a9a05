#pragma once

/**
 * @file circuit.hpp
 * @brief Gate-list circuit IR shared by synthesis, lowering, simulation and QASM I/O.
 *
 * Conventions:
 *  - qubit 0 is the least significant bit of a basis index;
 *  - Phase(phi) is diag(1, e^{i phi}) on the target, applied when every
 *    control is 1 (so S = Phase(pi/2), T = Phase(pi/4));
 *  - FlipZero negates the amplitude of |0...0> on its qubits;
 *  - OracleIndicator XORs table[x] onto its ancilla, where bit i of x is
 *    read from controls[i];
 *  - PermutationGate maps |x> to |table[x]> on its qubits, bit i of x being
 *    qubits[i].
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/error.hpp"
#include "qnr/numtheory.hpp"

namespace qnr {

using Qubit = std::uint32_t;

enum class GateKind {
    h,
    x,
    cnot,
    cz,
    toffoli,
    ccz,
    phase,
    flip_zero,
    oracle_indicator,
    permutation,
};

inline std::string_view to_string(GateKind kind) {
    switch (kind) {
        case GateKind::h: return "H";
        case GateKind::x: return "X";
        case GateKind::cnot: return "CNOT";
        case GateKind::cz: return "CZ";
        case GateKind::toffoli: return "Toffoli";
        case GateKind::ccz: return "CCZ";
        case GateKind::phase: return "Phase";
        case GateKind::flip_zero: return "FlipZero";
        case GateKind::oracle_indicator: return "OracleIndicator";
        case GateKind::permutation: return "PermutationGate";
    }
    return "?";
}

inline std::optional<GateKind> gate_kind_from_string(std::string_view name) {
    for (auto k : {GateKind::h, GateKind::x, GateKind::cnot, GateKind::cz, GateKind::toffoli, GateKind::ccz,
                   GateKind::phase, GateKind::flip_zero, GateKind::oracle_indicator, GateKind::permutation}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

using Table = std::vector<std::uint32_t>;

struct Gate {
    GateKind kind = GateKind::h;
    /// Operands. CNOT: {control, target}; Toffoli: {c1, c2, target};
    /// Phase: {target}; OracleIndicator: {ancilla}.
    std::vector<Qubit> qubits;
    /// Phase controls, or the OracleIndicator input wires.
    std::vector<Qubit> controls;
    double angle = 0.0;
    std::shared_ptr<const Table> table;

    static Gate h(Qubit q) { return {GateKind::h, {q}, {}, 0.0, nullptr}; }
    static Gate x(Qubit q) { return {GateKind::x, {q}, {}, 0.0, nullptr}; }
    static Gate cnot(Qubit control, Qubit target) { return {GateKind::cnot, {control, target}, {}, 0.0, nullptr}; }
    static Gate cz(Qubit a, Qubit b) { return {GateKind::cz, {a, b}, {}, 0.0, nullptr}; }
    static Gate toffoli(Qubit c1, Qubit c2, Qubit target) {
        return {GateKind::toffoli, {c1, c2, target}, {}, 0.0, nullptr};
    }
    static Gate ccz(Qubit a, Qubit b, Qubit c) { return {GateKind::ccz, {a, b, c}, {}, 0.0, nullptr}; }
    static Gate phase(Qubit target, double angle, std::vector<Qubit> controls = {}) {
        return {GateKind::phase, {target}, std::move(controls), angle, nullptr};
    }
    static Gate flip_zero(std::vector<Qubit> qubits) {
        return {GateKind::flip_zero, std::move(qubits), {}, 0.0, nullptr};
    }
    static Gate oracle(const std::vector<bool>& truth_table, std::vector<Qubit> inputs, Qubit ancilla) {
        auto t = std::make_shared<Table>(truth_table.begin(), truth_table.end());
        return {GateKind::oracle_indicator, {ancilla}, std::move(inputs), 0.0, std::move(t)};
    }
    static Gate permutation(Table images, std::vector<Qubit> qubits) {
        return {GateKind::permutation, std::move(qubits), {}, 0.0, std::make_shared<const Table>(std::move(images))};
    }

    /// Every wire the gate reads or writes.
    std::vector<Qubit> touched() const {
        std::vector<Qubit> all = qubits;
        all.insert(all.end(), controls.begin(), controls.end());
        return all;
    }

    bool operator==(const Gate& o) const {
        if (kind != o.kind || qubits != o.qubits || controls != o.controls || angle != o.angle) return false;
        if (!table || !o.table) return !table && !o.table;
        return *table == *o.table;
    }
};

struct CircuitMetadata {
    std::optional<std::uint64_t> prime;
    std::string provenance;
    /// Qubit measured into classical bit j. Empty means "every qubit, in order".
    std::vector<Qubit> measured;

    bool operator==(const CircuitMetadata&) const = default;
};

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(unsigned width, CircuitMetadata meta = {}) : width_(width), meta_(std::move(meta)) {}

    unsigned width() const noexcept { return width_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    const CircuitMetadata& metadata() const noexcept { return meta_; }
    CircuitMetadata& metadata() noexcept { return meta_; }

    Circuit& add(Gate g) {
        gates_.push_back(std::move(g));
        return *this;
    }

    Circuit& append(const Circuit& other) {
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    /// Qubits read out at the end, classical bit j <- measured_qubits()[j].
    std::vector<Qubit> measured_qubits() const {
        if (!meta_.measured.empty()) return meta_.measured;
        std::vector<Qubit> all(width_);
        for (unsigned q = 0; q < width_; ++q) all[q] = q;
        return all;
    }

    bool operator==(const Circuit&) const = default;

private:
    unsigned width_ = 0;
    std::vector<Gate> gates_;
    CircuitMetadata meta_;
};

/// Gate count per kind.
inline std::map<GateKind, std::size_t> census(const Circuit& c) {
    std::map<GateKind, std::size_t> out;
    for (const auto& g : c.gates()) ++out[g.kind];
    return out;
}

inline std::size_t count_kind(const Circuit& c, GateKind kind) {
    return static_cast<std::size_t>(
        std::count_if(c.gates().begin(), c.gates().end(), [kind](const Gate& g) { return g.kind == kind; }));
}

namespace detail {

inline std::size_t expected_arity(GateKind kind) {
    switch (kind) {
        case GateKind::h:
        case GateKind::x:
        case GateKind::phase:
        case GateKind::oracle_indicator: return 1;
        case GateKind::cnot:
        case GateKind::cz: return 2;
        case GateKind::toffoli:
        case GateKind::ccz: return 3;
        case GateKind::flip_zero:
        case GateKind::permutation: return 0;  // variable
    }
    return 0;
}

}  // namespace detail

/// Every invariant violation in `c`; an empty list means the circuit is valid.
inline std::vector<std::string> validate(const Circuit& c) {
    std::vector<std::string> errors;
    const unsigned width = c.width();
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
        const Gate& g = c.gates()[i];
        const std::string where = "gate " + std::to_string(i) + " (" + std::string(to_string(g.kind)) + "): ";

        const std::size_t arity = detail::expected_arity(g.kind);
        if (arity != 0 && g.qubits.size() != arity) {
            errors.push_back(where + "expected " + std::to_string(arity) + " operand(s), got " +
                             std::to_string(g.qubits.size()));
        }
        if (arity == 0 && g.qubits.empty()) errors.push_back(where + "no operands");
        if (!g.controls.empty() && g.kind != GateKind::phase && g.kind != GateKind::oracle_indicator) {
            errors.push_back(where + "controls are not allowed on this gate kind");
        }

        auto wires = g.touched();
        for (Qubit q : wires) {
            if (q >= width) {
                errors.push_back(where + "qubit " + std::to_string(q) + " out of range for width " +
                                 std::to_string(width));
            }
        }
        auto sorted = wires;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            errors.push_back(where + "duplicate qubit");
        }

        if (g.kind == GateKind::oracle_indicator || g.kind == GateKind::permutation) {
            const std::size_t bits = g.kind == GateKind::oracle_indicator ? g.controls.size() : g.qubits.size();
            if (bits > 26) {
                errors.push_back(where + "table over " + std::to_string(bits) + " bits is too large");
                continue;
            }
            const std::size_t size = std::size_t{1} << bits;
            if (!g.table || g.table->size() != size) {
                errors.push_back(where + "table must have " + std::to_string(size) + " entries");
                continue;
            }
            if (g.kind == GateKind::oracle_indicator) {
                if (std::any_of(g.table->begin(), g.table->end(), [](std::uint32_t v) { return v > 1; })) {
                    errors.push_back(where + "indicator table entries must be 0 or 1");
                }
            } else {
                std::vector<bool> hit(size, false);
                bool bijective = true;
                for (std::uint32_t v : *g.table) {
                    if (v >= size || hit[v]) {
                        bijective = false;
                        break;
                    }
                    hit[v] = true;
                }
                if (!bijective) errors.push_back(where + "permutation table is not a bijection");
            }
        } else if (g.table) {
            errors.push_back(where + "unexpected table");
        }
    }

    const auto& meta = c.metadata();
    if (meta.prime && (!is_prime(*meta.prime) || *meta.prime % 8 != 1)) {
        errors.push_back("metadata: " + std::to_string(*meta.prime) + " is not a prime congruent to 1 mod 8");
    }
    auto measured = meta.measured;
    for (Qubit q : measured) {
        if (q >= width) errors.push_back("metadata: measured qubit " + std::to_string(q) + " out of range");
    }
    std::sort(measured.begin(), measured.end());
    if (std::adjacent_find(measured.begin(), measured.end()) != measured.end()) {
        errors.push_back("metadata: qubit measured twice");
    }
    return errors;
}

/// Throws InvalidArgument listing every problem when `c` is invalid.
inline void require_valid(const Circuit& c) {
    auto errors = validate(c);
    if (errors.empty()) return;
    std::string msg = "invalid circuit: " + errors.front();
    if (errors.size() > 1) msg += " (+" + std::to_string(errors.size() - 1) + " more)";
    throw InvalidArgument(msg);
}

}  // namespace qnr
