#pragma once

/**
 * @file lower.hpp
 * @brief Decomposition into {H, X, Phase, CNOT, CZ} and nearest-neighbor routing.
 *
 * Every diagonal gate is lowered the same way: write it as e^{i phi h(x)}
 * for a Boolean h, expand h in the parity basis (Walsh transform), and run a
 * parity network with Phase(phi * hhat(S)) at each exposed parity S. The
 * constant term is a global phase and is dropped.
 *
 * Toffoli and CCZ use the textbook 6-CNOT T-gate networks instead, which
 * need fewer CNOTs than the generic route.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"
#include "qnr/parity_network.hpp"

namespace qnr {

/// Inputs allowed on an OracleIndicator that is to be lowered.
inline constexpr unsigned kMaxLoweredOracleInputs = 12;
/// Qubits allowed on a PermutationGate that is to be lowered.
inline constexpr unsigned kMaxLoweredPermutationQubits = 8;
/// Widest diagonal that uses the nearest-neighbor parity network directly.
inline constexpr unsigned kMaxNearestNeighborNetwork = 6;

/// True iff only H, X, uncontrolled Phase, CNOT and CZ appear (and, with
/// `nearest_neighbor`, every 2-qubit gate acts on adjacent qubits).
inline bool is_lowered(const Circuit& c, bool nearest_neighbor = false) {
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::h:
            case GateKind::x: break;
            case GateKind::phase:
                if (!g.controls.empty()) return false;
                break;
            case GateKind::cnot:
            case GateKind::cz: {
                const auto a = g.qubits[0];
                const auto b = g.qubits[1];
                if (nearest_neighbor && (a > b ? a - b : b - a) != 1) return false;
                break;
            }
            default: return false;
        }
    }
    return true;
}

namespace detail {

inline void toffoli_network(std::vector<Gate>& out, Qubit c1, Qubit c2, Qubit t, bool with_h) {
    constexpr double q = std::numbers::pi / 4;
    if (with_h) out.push_back(Gate::h(t));
    out.push_back(Gate::cnot(c2, t));
    out.push_back(Gate::phase(t, -q));
    out.push_back(Gate::cnot(c1, t));
    out.push_back(Gate::phase(t, q));
    out.push_back(Gate::cnot(c2, t));
    out.push_back(Gate::phase(t, -q));
    out.push_back(Gate::cnot(c1, t));
    out.push_back(Gate::phase(c2, q));
    out.push_back(Gate::phase(t, q));
    if (with_h) out.push_back(Gate::h(t));
    out.push_back(Gate::cnot(c1, c2));
    out.push_back(Gate::phase(c1, q));
    out.push_back(Gate::phase(c2, -q));
    out.push_back(Gate::cnot(c1, c2));
}

inline bool contiguous(std::vector<Qubit> w) {
    std::sort(w.begin(), w.end());
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] != w[i - 1] + 1) return false;
    }
    return true;
}

/// e^{i phi h(x)} on `wires`, bit i of x read from wires[i]; global phase dropped.
inline void diagonal_gates(std::vector<Gate>& out, std::vector<Qubit> wires, std::function<bool(std::uint64_t)> h,
                           double phi, bool nearest_neighbor) {
    const auto m = static_cast<unsigned>(wires.size());
    if (m == 0) return;
    if (m > 20) throw WidthLimit("diagonal of " + std::to_string(m) + " qubits is too wide to lower");

    if (nearest_neighbor) {
        // Re-index so that position i is the i-th smallest wire.
        std::vector<unsigned> order(m);
        for (unsigned i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](unsigned a, unsigned b) { return wires[a] < wires[b]; });
        std::vector<Qubit> sorted(m);
        for (unsigned i = 0; i < m; ++i) sorted[i] = wires[order[i]];
        h = [h, order](std::uint64_t y) {
            std::uint64_t x = 0;
            for (std::size_t i = 0; i < order.size(); ++i) x |= ((y >> i) & 1u) << order[i];
            return h(x);
        };
        wires = std::move(sorted);
    }

    const std::size_t dim = std::size_t{1} << m;
    std::vector<double> w(dim);
    for (std::size_t x = 0; x < dim; ++x) w[x] = h(x) ? -1.0 : 1.0;
    for (std::size_t len = 1; len < dim; len <<= 1) {
        for (std::size_t i = 0; i < dim; i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double a = w[j];
                const double b = w[j + len];
                w[j] = a + b;
                w[j + len] = a - b;
            }
        }
    }
    const double scale = phi / static_cast<double>(dim);

    const bool use_nn = nearest_neighbor && m <= kMaxNearestNeighborNetwork && contiguous(wires);
    const ParityNetwork net = use_nn ? nearest_neighbor_parity_network(m) : gray_parity_network(m);
    auto gates = parity_network_gates(net, wires, [&](std::uint32_t mask) { return scale * w[mask]; });
    out.insert(out.end(), std::make_move_iterator(gates.begin()), std::make_move_iterator(gates.end()));
}

inline std::uint64_t all_ones(std::size_t m) { return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1; }

/// X on `target` when every control is 1.
inline void mcx_gates(std::vector<Gate>& out, const std::vector<Qubit>& controls, Qubit target, bool nn) {
    switch (controls.size()) {
        case 0: out.push_back(Gate::x(target)); return;
        case 1: out.push_back(Gate::cnot(controls[0], target)); return;
        case 2: toffoli_network(out, controls[0], controls[1], target, true); return;
        default: break;
    }
    std::vector<Qubit> wires = controls;
    wires.push_back(target);
    const auto ones = all_ones(wires.size());
    out.push_back(Gate::h(target));
    diagonal_gates(out, wires, [ones](std::uint64_t x) { return x == ones; }, std::numbers::pi, nn);
    out.push_back(Gate::h(target));
}

/// Transformation-based synthesis: peel the permutation into MCX gates,
/// fixing images in increasing input order.
inline void permutation_gates(std::vector<Gate>& out, const Gate& g, bool nn) {
    const auto k = g.qubits.size();
    if (k > kMaxLoweredPermutationQubits) {
        throw UnsupportedGate("PermutationGate on " + std::to_string(k) + " qubits exceeds the lowering budget of " +
                              std::to_string(kMaxLoweredPermutationQubits));
    }
    Table f = *g.table;
    struct Mcx {
        std::uint32_t controls;
        unsigned target;
    };
    std::vector<Mcx> peeled;
    auto apply = [&](Mcx m) {
        for (auto& y : f) {
            if ((y & m.controls) == m.controls) y ^= 1u << m.target;
        }
        peeled.push_back(m);
    };
    for (std::uint32_t i = 0; i < f.size(); ++i) {
        if (f[i] == i) continue;
        const std::uint32_t up = i & ~f[i];
        for (unsigned b = 0; b < k; ++b) {
            if (up & (1u << b)) apply({f[i], b});
        }
        const std::uint32_t down = f[i] & ~i;
        for (unsigned b = 0; b < k; ++b) {
            if (down & (1u << b)) apply({i, b});
        }
    }
    // peeled_r ... peeled_1 f = id, so f = peeled_1 ... peeled_r: run in reverse.
    for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
        std::vector<Qubit> controls;
        for (unsigned b = 0; b < k; ++b) {
            if (it->controls & (1u << b)) controls.push_back(g.qubits[b]);
        }
        mcx_gates(out, controls, g.qubits[it->target], nn);
    }
}

inline void expand(std::vector<Gate>& out, const Gate& g, bool nn) {
    switch (g.kind) {
        case GateKind::h:
        case GateKind::x:
        case GateKind::cnot:
        case GateKind::cz: out.push_back(g); return;
        case GateKind::toffoli: toffoli_network(out, g.qubits[0], g.qubits[1], g.qubits[2], true); return;
        case GateKind::ccz: toffoli_network(out, g.qubits[0], g.qubits[1], g.qubits[2], false); return;
        case GateKind::phase: {
            if (g.controls.empty()) {
                out.push_back(g);
                return;
            }
            std::vector<Qubit> wires = g.controls;
            wires.push_back(g.qubits[0]);
            const auto ones = all_ones(wires.size());
            diagonal_gates(out, wires, [ones](std::uint64_t x) { return x == ones; }, g.angle, nn);
            return;
        }
        case GateKind::flip_zero:
            diagonal_gates(out, g.qubits, [](std::uint64_t x) { return x != 0; }, std::numbers::pi, nn);
            return;
        case GateKind::oracle_indicator: {
            if (g.controls.size() > kMaxLoweredOracleInputs) {
                throw UnsupportedGate("OracleIndicator with " + std::to_string(g.controls.size()) +
                                      " inputs exceeds the lowering budget of " +
                                      std::to_string(kMaxLoweredOracleInputs));
            }
            // H on the ancilla turns the XOR into the phase (-1)^(f(x) a).
            const Qubit anc = g.qubits[0];
            std::vector<Qubit> wires = g.controls;
            wires.push_back(anc);
            const auto table = g.table;
            const auto m = g.controls.size();
            out.push_back(Gate::h(anc));
            diagonal_gates(
                out, wires,
                [table, m](std::uint64_t x) { return ((x >> m) & 1u) && (*table)[x & all_ones(m)] != 0; },
                std::numbers::pi, nn);
            out.push_back(Gate::h(anc));
            return;
        }
        case GateKind::permutation: permutation_gates(out, g, nn); return;
    }
}

/// Physical positions on a line; SWAPs are 3 CNOTs and the layout is kept
/// between gates, then restored at the end.
class LineRouter {
public:
    explicit LineRouter(unsigned width) : phys_(width), logical_(width) {
        for (unsigned i = 0; i < width; ++i) phys_[i] = logical_[i] = i;
    }

    void route(const Gate& g, Circuit& out) {
        Gate mapped = g;
        if (g.kind == GateKind::cnot || g.kind == GateKind::cz) {
            const Qubit a = phys_[g.qubits[0]];
            Qubit b = phys_[g.qubits[1]];
            while ((a > b ? a - b : b - a) > 1) {
                const Qubit step = b > a ? b - 1 : b + 1;
                swap_positions(b, step, out);
                b = step;
            }
        }
        for (auto& q : mapped.qubits) q = phys_[q];
        out.add(std::move(mapped));
    }

    void restore(Circuit& out) {
        for (bool moved = true; moved;) {
            moved = false;
            for (Qubit i = 0; i + 1 < logical_.size(); ++i) {
                if (logical_[i] > logical_[i + 1]) {
                    swap_positions(i, i + 1, out);
                    moved = true;
                }
            }
        }
    }

private:
    void swap_positions(Qubit a, Qubit b, Circuit& out) {
        out.add(Gate::cnot(a, b)).add(Gate::cnot(b, a)).add(Gate::cnot(a, b));
        std::swap(logical_[a], logical_[b]);
        phys_[logical_[a]] = a;
        phys_[logical_[b]] = b;
    }

    std::vector<Qubit> phys_;     // logical -> position
    std::vector<Qubit> logical_;  // position -> logical
};

}  // namespace detail

/// Decompose `c` into H, X, Phase, CNOT and CZ, equivalent up to global phase.
/// Already-lowered gates pass through unchanged.
inline Circuit lower(const Circuit& c, bool nearest_neighbor) {
    require_valid(c);
    std::vector<Gate> flat;
    for (const auto& g : c.gates()) detail::expand(flat, g, nearest_neighbor);

    Circuit out(c.width(), c.metadata());
    if (!nearest_neighbor) {
        for (auto& g : flat) out.add(std::move(g));
        return out;
    }
    detail::LineRouter router(c.width());
    for (const auto& g : flat) router.route(g, out);
    router.restore(out);
    return out;
}

}  // namespace qnr
