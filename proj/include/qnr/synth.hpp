#pragma once

/**
 * @file synth.hpp
 * @brief Generators for the nonresidue-sampling benchmark circuits.
 *
 * The general construction works for any prime p = 1 (mod 8):
 *
 *   1. H on every register qubit;
 *   2. XOR [(x/p) = -1] onto ancilla A and [x < p] onto ancilla B;
 *   3. rotate odd nonresidues below p by -2 theta, then all of them by theta;
 *   4. uncompute both indicators;
 *   5. invert about the mean (H, FlipZero, H).
 *
 * With theta = arccos(1 - N/(p-1)) the mean lands at half the uniform
 * amplitude, so every basis state that is not a nonresidue below p
 * cancels and the nonresidues each end with probability 2/(p-1).
 *
 * Indicator and comparator are truth-table oracle gates simulated natively;
 * no reversible Jacobi arithmetic is synthesized.
 */

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"
#include "qnr/numtheory.hpp"
#include "qnr/parity_network.hpp"
#include "qnr/statevector.hpp"

namespace qnr {

struct SynthConfig {
    /// Node budget of the indicator-permutation search (`synth.search_node_limit`).
    std::uint64_t search_node_limit = 10'000'000;

    /// Defaults, with QNR_SEARCH_LIMIT overriding the node budget when set.
    static SynthConfig from_env() {
        SynthConfig cfg;
        if (const char* env = std::getenv("QNR_SEARCH_LIMIT"); env != nullptr && *env != '\0') {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0' || v == 0) {
                throw InvalidArgument(std::string("QNR_SEARCH_LIMIT must be a positive integer, got '") + env + "'");
            }
            cfg.search_node_limit = v;
        }
        return cfg;
    }
};

namespace detail {

inline std::vector<Qubit> iota_qubits(unsigned n, Qubit first = 0) {
    std::vector<Qubit> q(n);
    for (unsigned i = 0; i < n; ++i) q[i] = first + i;
    return q;
}

inline void add_hadamards(Circuit& c, const std::vector<Qubit>& qubits) {
    for (Qubit q : qubits) c.add(Gate::h(q));
}

inline void add_inversion_about_mean(Circuit& c, const std::vector<Qubit>& reg) {
    add_hadamards(c, reg);
    c.add(Gate::flip_zero(reg));
    add_hadamards(c, reg);
}

}  // namespace detail

/// Sampler circuit for any prime p = 1 (mod 8). Register qubits 0..n-1 (qubit 0 is
/// the parity bit x0), Jacobi ancilla n, comparator ancilla n+1.
inline Circuit build_general_circuit(const ProblemInstance& inst) {
    const unsigned width = inst.n + 2;
    if (width > kMaxSimWidth) {
        throw WidthLimit("p = " + std::to_string(inst.p) + " needs " + std::to_string(width) +
                         " qubits, above the simulator limit");
    }
    const auto reg = detail::iota_qubits(inst.n);
    const Qubit jacobi_anc = inst.n;
    const Qubit less_anc = inst.n + 1;

    std::vector<bool> is_qnr(inst.big_n, false);
    std::vector<bool> below_p(inst.big_n, false);
    for (std::uint64_t x = 0; x < inst.big_n; ++x) {
        is_qnr[x] = jacobi(static_cast<std::int64_t>(x), static_cast<std::int64_t>(inst.p)) == -1;
        below_p[x] = x < inst.p;
    }

    CircuitMetadata meta;
    meta.prime = inst.p;
    meta.provenance = "general nonresidue sampler, p=" + std::to_string(inst.p);
    meta.measured = reg;
    Circuit c(width, meta);

    detail::add_hadamards(c, reg);
    c.add(Gate::oracle(is_qnr, reg, jacobi_anc));
    c.add(Gate::oracle(below_p, reg, less_anc));
    c.add(Gate::phase(jacobi_anc, -2.0 * inst.theta, {less_anc, reg[0]}));
    c.add(Gate::phase(jacobi_anc, inst.theta, {less_anc}));
    c.add(Gate::oracle(below_p, reg, less_anc));
    c.add(Gate::oracle(is_qnr, reg, jacobi_anc));
    detail::add_inversion_about_mean(c, reg);
    return c;
}

/// Fermat-prime variant: theta is pi, so the comparator disappears and the
/// register shrinks to 2^k bits; odd and even nonresidues get -i and +i.
inline Circuit build_fermat_circuit(const ProblemInstance& inst) {
    if (!inst.is_fermat) throw UnsupportedPrime("p = " + std::to_string(inst.p) + " is not a Fermat prime");
    const unsigned bits = inst.fermat_bits;
    if (bits + 1 > kMaxSimWidth) throw WidthLimit("Fermat circuit for p = " + std::to_string(inst.p) + " too wide");

    const auto reg = detail::iota_qubits(bits);
    const Qubit anc = bits;
    const auto g = indicator_truth_table(inst.p, bits);

    CircuitMetadata meta;
    meta.prime = inst.p;
    meta.provenance = "Fermat nonresidue sampler, p=" + std::to_string(inst.p);
    meta.measured = reg;
    Circuit c(bits + 1, meta);

    detail::add_hadamards(c, reg);
    c.add(Gate::oracle(g, reg, anc));
    c.add(Gate::cz(reg[0], anc));
    c.add(Gate::phase(anc, std::numbers::pi / 2));
    c.add(Gate::oracle(g, reg, anc));
    detail::add_inversion_about_mean(c, reg);
    return c;
}

// ---------------------------------------------------------------------------
// Grover gate from phase rotations on every nonzero parity

/// Elementary symmetric polynomial sigma_j of the bits of x (= C(|x|, j)).
inline std::uint64_t elementary_symmetric(std::uint32_t x, unsigned j) {
    const auto k = static_cast<unsigned>(std::popcount(x));
    if (j > k) return 0;
    std::uint64_t c = 1;
    for (unsigned i = 0; i < j; ++i) c = c * (k - i) / (i + 1);
    return c;
}

struct GroverGatePlan {
    unsigned width = 0;
    double phase_per_combination = 0.0;  ///< pi / 2^(width-1)
    std::vector<std::uint32_t> combinations;  ///< every nonzero mask once, in schedule order
    std::vector<CnotStep> cnot_schedule;
    ParityNetwork network;

    /// Number of combinations whose parity with x is odd.
    std::uint64_t odd_parity_count(std::uint32_t x) const {
        std::uint64_t s = 0;
        for (auto m : combinations) s += static_cast<unsigned>(std::popcount(m & x)) & 1u;
        return s;
    }
};

/// Phase pi/2^(w-1) on each nonzero parity multiplies every nonzero basis
/// state by -1 and leaves |0...0> alone: FlipZero up to global phase.
inline GroverGatePlan plan_grover_gate(unsigned width, bool nearest_neighbor) {
    if (width < 2 || width > 8) throw InvalidArgument("grover gate width must be 2..8, got " + std::to_string(width));
    GroverGatePlan plan;
    plan.width = width;
    plan.phase_per_combination = std::numbers::pi / static_cast<double>(1u << (width - 1));
    plan.network = nearest_neighbor ? nearest_neighbor_parity_network(width) : gray_parity_network(width);
    for (const auto& s : plan.network.slots) plan.combinations.push_back(s.mask);
    plan.cnot_schedule = plan.network.cnots;
    return plan;
}

inline Circuit build_grover_gate(unsigned width, bool nearest_neighbor) {
    const auto plan = plan_grover_gate(width, nearest_neighbor);
    CircuitMetadata meta;
    meta.provenance = std::string("grover gate via parity phases") + (nearest_neighbor ? ", nearest neighbor" : "");
    Circuit c(width, meta);
    const double phi = plan.phase_per_combination;
    for (auto& g : parity_network_gates(plan.network, detail::iota_qubits(width), [phi](std::uint32_t) { return phi; })) {
        c.add(std::move(g));
    }
    return c;
}

/// 4-qubit zero flip through a scratch qubit (qubit 4): negate the inputs,
/// compute x0 x1 into scratch, CCZ with x2 x3, uncompute. Correct when the
/// scratch starts in |0>.
inline Circuit build_basic_zeroflip() {
    CircuitMetadata meta;
    meta.provenance = "zero flip via Toffoli/CCZ with scratch qubit 4";
    meta.measured = detail::iota_qubits(4);
    Circuit c(5, meta);
    for (Qubit q = 0; q < 4; ++q) c.add(Gate::x(q));
    c.add(Gate::toffoli(0, 1, 4));
    c.add(Gate::ccz(2, 3, 4));
    c.add(Gate::toffoli(0, 1, 4));
    for (Qubit q = 0; q < 4; ++q) c.add(Gate::x(q));
    return c;
}

// ---------------------------------------------------------------------------
// Indicator permutation search

/// Classical action of an {X, CNOT, Toffoli, PermutationGate} circuit on a basis index.
inline std::uint64_t reversible_apply(const Circuit& c, std::uint64_t x) {
    for (const auto& g : c.gates()) {
        auto bit = [&](Qubit q) { return (x >> q) & 1u; };
        switch (g.kind) {
            case GateKind::x: x ^= std::uint64_t{1} << g.qubits[0]; break;
            case GateKind::cnot:
                if (bit(g.qubits[0])) x ^= std::uint64_t{1} << g.qubits[1];
                break;
            case GateKind::toffoli:
                if (bit(g.qubits[0]) && bit(g.qubits[1])) x ^= std::uint64_t{1} << g.qubits[2];
                break;
            case GateKind::permutation: {
                const auto v = detail::gather_bits(x, g.qubits);
                x = detail::scatter_bits(x, g.qubits, (*g.table)[v]);
                break;
            }
            default:
                throw UnsupportedGate("reversible_apply: " + std::string(to_string(g.kind)) + " is not classical");
        }
    }
    return x;
}

struct PermutationSearchResult {
    Circuit circuit;
    std::size_t toffoli_count = 0;
    std::size_t cnot_count = 0;
    Qubit coordinate_wire = 1;
    std::uint64_t nodes_expanded = 0;
};

namespace detail {

struct RevGate {
    GateKind kind;
    std::uint8_t c1, c2, target;  // unused controls are 0xff
};

// X, then CNOT, then Toffoli; wire 0 is never a target. Lexicographic order
// of gate sequences is by these indices.
inline const std::vector<RevGate>& search_gate_set() {
    static const std::vector<RevGate> gates = [] {
        std::vector<RevGate> g;
        for (std::uint8_t t = 1; t < 4; ++t) g.push_back({GateKind::x, 0xff, 0xff, t});
        for (std::uint8_t c = 0; c < 4; ++c) {
            for (std::uint8_t t = 1; t < 4; ++t) {
                if (c != t) g.push_back({GateKind::cnot, c, 0xff, t});
            }
        }
        for (std::uint8_t t = 1; t < 4; ++t) {
            std::vector<std::uint8_t> cs;
            for (std::uint8_t c = 0; c < 4; ++c) {
                if (c != t) cs.push_back(c);
            }
            for (std::size_t i = 0; i < cs.size(); ++i) {
                for (std::size_t j = i + 1; j < cs.size(); ++j) g.push_back({GateKind::toffoli, cs[i], cs[j], t});
            }
        }
        return g;
    }();
    return gates;
}

inline bool rev_controls_on(const RevGate& g, std::uint8_t wire) { return g.c1 == wire || g.c2 == wire; }

inline bool rev_commute(const RevGate& a, const RevGate& b) {
    return !rev_controls_on(a, b.target) && !rev_controls_on(b, a.target);
}

/// Wire functions as 16-bit truth tables: bit x of wire w is output bit w on input x.
using WireTables = std::array<std::uint16_t, 4>;

inline WireTables rev_step(const WireTables& s, const RevGate& g) {
    WireTables out = s;
    std::uint16_t cond = 0xffff;
    if (g.c1 != 0xff) cond &= s[g.c1];
    if (g.c2 != 0xff) cond &= s[g.c2];
    out[g.target] ^= cond;
    return out;
}

inline std::uint64_t pack(const WireTables& s) {
    return std::uint64_t{s[0]} | std::uint64_t{s[1]} << 16 | std::uint64_t{s[2]} << 32 | std::uint64_t{s[3]} << 48;
}

/// Algebraic degree of a 4-variable Boolean function via the Moebius transform.
inline unsigned anf_degree(std::uint16_t tt) {
    std::array<std::uint8_t, 16> a{};
    for (unsigned x = 0; x < 16; ++x) a[x] = (tt >> x) & 1u;
    for (unsigned i = 0; i < 4; ++i) {
        for (unsigned x = 0; x < 16; ++x) {
            if (x & (1u << i)) a[x] ^= a[x ^ (1u << i)];
        }
    }
    unsigned deg = 0;
    for (unsigned x = 0; x < 16; ++x) {
        if (a[x]) deg = std::max(deg, static_cast<unsigned>(std::popcount(x)));
    }
    return deg;
}

/// f lies in {c + sum a_w s[w]}: the affine tail can still produce it.
inline bool in_affine_span(const WireTables& s, std::uint16_t f) {
    for (unsigned a = 0; a < 32; ++a) {
        std::uint16_t v = (a & 16u) ? 0xffff : 0;
        for (unsigned w = 0; w < 4; ++w) {
            if (a & (1u << w)) v ^= s[w];
        }
        if (v == f) return true;
    }
    return false;
}

class PermutationSearch {
public:
    PermutationSearch(std::uint16_t target, std::uint64_t node_limit) : target_(target), node_limit_(node_limit) {}

    /// Lexicographically first sequence with exactly `toffolis` Toffolis and `length` gates.
    bool run(unsigned toffolis, unsigned length, std::vector<std::size_t>& out) {
        stride_ = length + 1;
        failed_.assign(std::size_t{toffolis + 1} * stride_, {});
        path_.clear();
        WireTables id{0xaaaa, 0xcccc, 0xf0f0, 0xff00};
        if (dfs(id, toffolis, length, SIZE_MAX)) {
            out = path_;
            return true;
        }
        return false;
    }

    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    bool dfs(const WireTables& s, unsigned toff_left, unsigned depth_left, std::size_t prev) {
        if (++nodes_ > node_limit_) {
            throw SearchExhausted("indicator permutation search exceeded " + std::to_string(node_limit_) + " nodes");
        }
        if (depth_left == 0) return s[1] == target_;
        if (toff_left > depth_left) return false;
        if (toff_left == 0 && !in_affine_span(s, target_)) return false;
        unsigned maxdeg = 0;
        for (auto w : s) maxdeg = std::max(maxdeg, anf_degree(w));
        if ((maxdeg << toff_left) < anf_degree(target_)) return false;

        auto& failed = failed_[toff_left * stride_ + depth_left];
        if (failed.contains(pack(s))) return false;

        const auto& gates = search_gate_set();
        for (std::size_t gi = 0; gi < gates.size(); ++gi) {
            const RevGate& g = gates[gi];
            const bool is_toffoli = g.kind == GateKind::toffoli;
            if (is_toffoli && toff_left == 0) continue;
            if (!is_toffoli && toff_left == depth_left) continue;
            if (depth_left == 1 && g.target != 1) continue;
            if (prev != SIZE_MAX) {
                if (gi == prev) continue;
                if (gi < prev && rev_commute(gates[prev], g)) continue;
            }
            path_.push_back(gi);
            if (dfs(rev_step(s, g), toff_left - (is_toffoli ? 1u : 0u), depth_left - 1, gi)) return true;
            path_.pop_back();
        }
        failed.insert(pack(s));
        return false;
    }

    std::uint16_t target_;
    std::uint64_t node_limit_;
    std::uint64_t nodes_ = 0;
    std::vector<std::size_t> path_;
    std::size_t stride_ = 1;
    // Dead-end states, bucketed by (Toffolis left, gates left).
    std::vector<std::unordered_set<std::uint64_t>> failed_;
};

}  // namespace detail

/// Shortest {X, CNOT, Toffoli} circuit on 4 wires whose wire-1 output is
/// `table` and whose wire-0 output is x0. Toffoli count is minimized first,
/// then gate count; ties go to the lexicographically first gate sequence.
inline PermutationSearchResult synthesize_indicator_permutation(const std::vector<bool>& table,
                                                                const SynthConfig& config = SynthConfig::from_env()) {
    if (table.size() != 16) throw InvalidArgument("indicator table must have 16 entries");
    std::array<int, 4> classes{};
    std::uint16_t target = 0;
    for (unsigned x = 0; x < 16; ++x) {
        if (table[x]) target |= static_cast<std::uint16_t>(1u << x);
        ++classes[(x & 1u) | (table[x] ? 2u : 0u)];
    }
    if (std::popcount(target) != 8) throw InvalidArgument("indicator table is not balanced");
    if (std::any_of(classes.begin(), classes.end(), [](int n) { return n != 4; })) {
        throw InvalidArgument("no permutation keeps x0 and computes this table: (x0, f) pairs are not equidistributed");
    }

    const unsigned deg = detail::anf_degree(target);
    unsigned min_toffolis = 0;
    while ((1u << min_toffolis) < deg) ++min_toffolis;

    detail::PermutationSearch search(target, config.search_node_limit);
    std::vector<std::size_t> seq;
    bool found = false;
    constexpr unsigned kMaxToffolis = 6;
    constexpr unsigned kMaxAffineRun = 12;
    for (unsigned t = min_toffolis; t <= kMaxToffolis && !found; ++t) {
        for (unsigned len = t; len <= t + (t + 1) * kMaxAffineRun && !found; ++len) found = search.run(t, len, seq);
    }
    if (!found) throw SearchExhausted("no indicator permutation found within the search bounds");

    PermutationSearchResult result;
    CircuitMetadata meta;
    meta.provenance = "indicator permutation (coordinate wire 1)";
    result.circuit = Circuit(4, meta);
    for (std::size_t gi : seq) {
        const auto& g = detail::search_gate_set()[gi];
        switch (g.kind) {
            case GateKind::x: result.circuit.add(Gate::x(g.target)); break;
            case GateKind::cnot:
                result.circuit.add(Gate::cnot(g.c1, g.target));
                ++result.cnot_count;
                break;
            default:
                result.circuit.add(Gate::toffoli(g.c1, g.c2, g.target));
                ++result.toffoli_count;
                break;
        }
    }
    result.coordinate_wire = 1;
    result.nodes_expanded = search.nodes();
    return result;
}

/// Inverse of a self-inverse-gate circuit: the same gates in reverse order.
inline Circuit reversed(const Circuit& c) {
    Circuit out(c.width(), c.metadata());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        if (it->kind == GateKind::phase || it->kind == GateKind::permutation) {
            throw UnsupportedGate("reversed: " + std::string(to_string(it->kind)) + " is not self-inverse");
        }
        out.add(*it);
    }
    return out;
}

/// Four-qubit circuit for p = 17 with the forward indicator permutation
/// removed: on |+>^4 the permutation only relabels basis states, so only
/// its inverse is needed after the phase gates.
inline Circuit build_qnr17_reduced(const SynthConfig& config = SynthConfig::from_env()) {
    const auto sigma = synthesize_indicator_permutation(indicator_truth_table(17, 4), config);
    const auto reg = detail::iota_qubits(4);

    CircuitMetadata meta;
    meta.prime = 17;
    meta.provenance = "reduced p=17 nonresidue circuit";
    meta.measured = reg;
    Circuit c(4, meta);
    detail::add_hadamards(c, reg);
    c.add(Gate::cz(0, 1));
    c.add(Gate::phase(1, std::numbers::pi / 2));
    c.append(reversed(sigma.circuit));
    detail::add_inversion_about_mean(c, reg);
    return c;
}

}  // namespace qnr
