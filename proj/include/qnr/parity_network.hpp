#pragma once

/**
 * @file parity_network.hpp
 * @brief CNOT schedules that expose every nonzero parity of a set of wires.
 *
 * A diagonal phase e^{i sum_S c_S (x.S mod 2)} is realized by walking a
 * CNOT network in which each wanted parity x.S appears on some wire at some
 * point, dropping Phase(c_S) there, and ending with every wire restored.
 * Wires are abstract positions 0..m-1; mask bit i refers to position i.
 */

#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_map>
#include <vector>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"

namespace qnr {

struct CnotStep {
    unsigned control;
    unsigned target;

    bool operator==(const CnotStep&) const = default;
};

/// Parity `mask` sits on `wire` once the first `after_cnots` CNOTs have run.
struct ParitySlot {
    std::uint32_t mask;
    unsigned wire;
    std::size_t after_cnots;
};

struct ParityNetwork {
    unsigned width = 0;
    std::vector<CnotStep> cnots;
    std::vector<ParitySlot> slots;  ///< one per nonzero mask, ordered by after_cnots
};

/// Unrestricted Gray-code network: for each wire j, the lower wires are
/// folded into j in Gray-code order, so masks with top bit j appear on
/// wire j. Uses exactly 2^m - 2 CNOTs.
inline ParityNetwork gray_parity_network(unsigned m) {
    if (m == 0 || m > 20) throw InvalidArgument("gray_parity_network: width out of range");
    ParityNetwork net;
    net.width = m;
    for (unsigned j = 0; j < m; ++j) {
        const std::uint32_t top = 1u << j;
        net.slots.push_back({top, j, net.cnots.size()});
        if (j == 0) continue;
        std::uint32_t prev_gray = 0;
        for (std::uint32_t t = 1; t < top; ++t) {
            const std::uint32_t gray = t ^ (t >> 1);
            const auto flipped = static_cast<unsigned>(std::countr_zero(gray ^ prev_gray));
            net.cnots.push_back({flipped, j});
            net.slots.push_back({top | gray, j, net.cnots.size()});
            prev_gray = gray;
        }
        // prev_gray is now 1 << (j-1); fold it back out.
        net.cnots.push_back({j - 1, j});
    }
    return net;
}

namespace detail {

// Wire contents packed one byte per wire; supports m <= 8.
using PackedRows = std::uint64_t;

inline std::uint32_t row_of(PackedRows s, unsigned w) { return static_cast<std::uint32_t>((s >> (8 * w)) & 0xffu); }

inline PackedRows apply_cnot(PackedRows s, CnotStep c) {
    return s ^ (static_cast<PackedRows>(row_of(s, c.control)) << (8 * c.target));
}

inline std::vector<CnotStep> line_moves(unsigned m) {
    std::vector<CnotStep> moves;
    for (unsigned i = 0; i + 1 < m; ++i) {
        moves.push_back({i, i + 1});
        moves.push_back({i + 1, i});
    }
    return moves;
}

/// Shortest move sequence from `start` to the first state accepted by `goal`,
/// exploring at most `limit` states. Empty optional-like flag via `found`.
inline std::vector<CnotStep> bfs_path(PackedRows start, unsigned m, const std::function<bool(PackedRows)>& goal,
                                      std::size_t limit, bool& found) {
    const auto moves = line_moves(m);
    std::unordered_map<PackedRows, std::pair<PackedRows, CnotStep>> parent;
    parent.emplace(start, std::make_pair(start, CnotStep{0, 0}));
    std::deque<PackedRows> queue{start};
    found = false;
    PackedRows hit = start;
    if (goal(start)) {
        found = true;
        return {};
    }
    while (!queue.empty() && !found) {
        const PackedRows cur = queue.front();
        queue.pop_front();
        for (const auto& mv : moves) {
            const PackedRows nxt = apply_cnot(cur, mv);
            if (parent.contains(nxt)) continue;
            parent.emplace(nxt, std::make_pair(cur, mv));
            if (goal(nxt)) {
                hit = nxt;
                found = true;
                break;
            }
            if (parent.size() >= limit) return {};
            queue.push_back(nxt);
        }
    }
    if (!found) return {};
    std::vector<CnotStep> path;
    for (PackedRows s = hit; s != start;) {
        const auto& [prev, mv] = parent.at(s);
        path.push_back(mv);
        s = prev;
    }
    return {path.rbegin(), path.rend()};
}

}  // namespace detail

/// Network using only CNOTs between adjacent positions on a line.
///
/// Greedy: repeatedly take the shortest adjacent-CNOT path to a wire state
/// exposing a parity not yet seen. The way back to the identity is an exact
/// shortest path for m <= 4 and the reversed forward sequence otherwise.
inline ParityNetwork nearest_neighbor_parity_network(unsigned m) {
    if (m == 0 || m > 8) throw InvalidArgument("nearest_neighbor_parity_network: width must be 1..8");
    ParityNetwork net;
    net.width = m;

    detail::PackedRows identity = 0;
    for (unsigned w = 0; w < m; ++w) identity |= static_cast<detail::PackedRows>(1u << w) << (8 * w);

    const std::uint32_t total = (1u << m) - 1;
    std::vector<bool> covered(std::size_t{1} << m, false);
    std::uint32_t n_covered = 0;
    for (unsigned w = 0; w < m; ++w) {
        covered[1u << w] = true;
        ++n_covered;
        net.slots.push_back({1u << w, w, 0});
    }

    detail::PackedRows state = identity;
    auto exposes_new = [&](detail::PackedRows s) {
        for (unsigned w = 0; w < m; ++w) {
            if (!covered[detail::row_of(s, w)]) return true;
        }
        return false;
    };
    while (n_covered < total) {
        bool found = false;
        auto path = detail::bfs_path(state, m, exposes_new, std::size_t{1} << 24, found);
        if (!found) throw SearchExhausted("nearest_neighbor_parity_network: search budget exhausted");
        for (const auto& mv : path) {
            state = detail::apply_cnot(state, mv);
            net.cnots.push_back(mv);
            const std::uint32_t row = detail::row_of(state, mv.target);
            if (!covered[row]) {
                covered[row] = true;
                ++n_covered;
                net.slots.push_back({row, mv.target, net.cnots.size()});
            }
        }
    }

    bool found = false;
    std::vector<CnotStep> back;
    if (m <= 4) back = detail::bfs_path(state, m, [&](detail::PackedRows s) { return s == identity; }, 1u << 20, found);
    if (!found) back.assign(net.cnots.rbegin(), net.cnots.rend());
    net.cnots.insert(net.cnots.end(), back.begin(), back.end());
    return net;
}

/// Gates realizing prod_S e^{i angle(S) (x.S mod 2)} on `wires`; position i of
/// the network is wires[i]. Zero angles are skipped.
inline std::vector<Gate> parity_network_gates(const ParityNetwork& net, const std::vector<Qubit>& wires,
                                              const std::function<double(std::uint32_t)>& angle) {
    if (wires.size() != net.width) throw InvalidArgument("parity_network_gates: wire count mismatch");
    std::vector<Gate> out;
    std::size_t slot = 0;
    for (std::size_t done = 0; done <= net.cnots.size(); ++done) {
        for (; slot < net.slots.size() && net.slots[slot].after_cnots == done; ++slot) {
            const double a = angle(net.slots[slot].mask);
            if (a != 0.0) out.push_back(Gate::phase(wires[net.slots[slot].wire], a));
        }
        if (done < net.cnots.size()) {
            out.push_back(Gate::cnot(wires[net.cnots[done].control], wires[net.cnots[done].target]));
        }
    }
    return out;
}

}  // namespace qnr
