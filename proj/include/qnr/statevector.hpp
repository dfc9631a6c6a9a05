#pragma once

/**
 * @file statevector.hpp
 * @brief Dense statevector simulation of the circuit IR.
 *
 * Amplitudes are stored in basis-index order with qubit 0 as the least
 * significant bit. Every gate kind is applied natively, including
 * multi-controlled phases, FlipZero and the truth-table gates, so benchmark
 * circuits simulate without being lowered first.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"

namespace qnr {

using Amplitude = std::complex<double>;

/// 2^26 amplitudes at 16 bytes each is 1 GiB.
inline constexpr unsigned kMaxSimWidth = 26;

namespace detail {

inline std::uint64_t mask_of(std::span<const Qubit> qubits) {
    std::uint64_t m = 0;
    for (Qubit q : qubits) m |= std::uint64_t{1} << q;
    return m;
}

/// Bit i of the result is bit qubits[i] of `index`.
inline std::uint64_t gather_bits(std::uint64_t index, std::span<const Qubit> qubits) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) x |= ((index >> qubits[i]) & 1u) << i;
    return x;
}

/// Writes bit i of `value` into bit qubits[i] of `index`.
inline std::uint64_t scatter_bits(std::uint64_t index, std::span<const Qubit> qubits, std::uint64_t value) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << qubits[i];
        index = ((value >> i) & 1u) ? (index | bit) : (index & ~bit);
    }
    return index;
}

}  // namespace detail

class StateVector {
public:
    /// |0...0> on `width` qubits.
    explicit StateVector(unsigned width) : width_(width) {
        if (width > kMaxSimWidth) {
            throw WidthLimit("statevector width " + std::to_string(width) + " exceeds the limit of " +
                             std::to_string(kMaxSimWidth));
        }
        amps_.assign(std::size_t{1} << width, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    StateVector(unsigned width, std::vector<Amplitude> amplitudes) : width_(width), amps_(std::move(amplitudes)) {
        if (width > kMaxSimWidth) throw WidthLimit("statevector width " + std::to_string(width) + " too large");
        if (amps_.size() != (std::size_t{1} << width)) {
            throw InvalidArgument("statevector needs 2^" + std::to_string(width) + " amplitudes");
        }
    }

    static StateVector basis(unsigned width, std::uint64_t index) {
        StateVector s(width);
        s.amps_[0] = 0.0;
        s.amps_.at(index) = 1.0;
        return s;
    }

    unsigned width() const noexcept { return width_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    std::span<Amplitude> amplitudes() noexcept { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

    /// Arithmetic mean of all amplitudes.
    Amplitude mean() const {
        return std::accumulate(amps_.begin(), amps_.end(), Amplitude{}) / static_cast<double>(amps_.size());
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void apply(const Gate& g) {
        for (Qubit q : g.touched()) {
            if (q >= width_) throw InvalidArgument("gate touches qubit " + std::to_string(q) + " beyond the register");
        }
        switch (g.kind) {
            case GateKind::h: apply_h(g.qubits[0]); break;
            case GateKind::x: apply_controlled_x(0, g.qubits[0]); break;
            case GateKind::cnot: apply_controlled_x(bit(g.qubits[0]), g.qubits[1]); break;
            case GateKind::toffoli: apply_controlled_x(bit(g.qubits[0]) | bit(g.qubits[1]), g.qubits[2]); break;
            case GateKind::cz:
            case GateKind::ccz: apply_phase_mask(detail::mask_of(g.qubits), Amplitude{-1.0, 0.0}); break;
            case GateKind::phase:
                apply_phase_mask(bit(g.qubits[0]) | detail::mask_of(g.controls), std::polar(1.0, g.angle));
                break;
            case GateKind::flip_zero: apply_flip_zero(detail::mask_of(g.qubits)); break;
            case GateKind::oracle_indicator: apply_oracle(g); break;
            case GateKind::permutation: apply_permutation(g); break;
        }
    }

    void apply(const Circuit& c) {
        for (const auto& g : c.gates()) apply(g);
    }

    /// Pauli 'X', 'Y' or 'Z' on one qubit (noise insertion).
    void apply_pauli(Qubit q, char pauli) {
        const std::uint64_t b = bit(q);
        switch (pauli) {
            case 'X': apply_controlled_x(0, q); break;
            case 'Z': apply_phase_mask(b, Amplitude{-1.0, 0.0}); break;
            case 'Y':
                // Y = i X Z
                for (std::size_t i = 0; i < amps_.size(); ++i) {
                    if (i & b) continue;
                    const Amplitude a0 = amps_[i];
                    const Amplitude a1 = amps_[i | b];
                    amps_[i] = Amplitude{0.0, -1.0} * a1;
                    amps_[i | b] = Amplitude{0.0, 1.0} * a0;
                }
                break;
            default: throw InvalidArgument(std::string("unknown Pauli '") + pauli + "'");
        }
    }

private:
    static std::uint64_t bit(Qubit q) { return std::uint64_t{1} << q; }

    void apply_h(Qubit q) {
        const std::size_t stride = std::size_t{1} << q;
        const double r = 1.0 / std::sqrt(2.0);
        for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Amplitude a0 = amps_[i];
                const Amplitude a1 = amps_[i + stride];
                amps_[i] = r * (a0 + a1);
                amps_[i + stride] = r * (a0 - a1);
            }
        }
    }

    void apply_controlled_x(std::uint64_t control_mask, Qubit target) {
        const std::size_t stride = std::size_t{1} << target;
        for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                if ((i & control_mask) == control_mask) std::swap(amps_[i], amps_[i + stride]);
            }
        }
    }

    void apply_phase_mask(std::uint64_t mask, Amplitude factor) {
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & mask) == mask) amps_[i] *= factor;
        }
    }

    void apply_flip_zero(std::uint64_t mask) {
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if ((i & mask) == 0) amps_[i] = -amps_[i];
        }
    }

    void apply_oracle(const Gate& g) {
        const std::uint64_t anc = bit(g.qubits[0]);
        const Table& table = *g.table;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & anc) continue;
            if (table[detail::gather_bits(i, g.controls)]) std::swap(amps_[i], amps_[i | anc]);
        }
    }

    void apply_permutation(const Gate& g) {
        const Table& table = *g.table;
        std::vector<Amplitude> out(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            const std::uint64_t x = detail::gather_bits(i, g.qubits);
            out[detail::scatter_bits(i, g.qubits, table[x])] = amps_[i];
        }
        amps_ = std::move(out);
    }

    unsigned width_;
    std::vector<Amplitude> amps_;
};

/// Final state of `c` started from |0...0>.
inline StateVector run(const Circuit& c) {
    if (c.width() > kMaxSimWidth) {
        throw WidthLimit("circuit width " + std::to_string(c.width()) + " exceeds the simulator limit of " +
                         std::to_string(kMaxSimWidth));
    }
    require_valid(c);
    StateVector s(c.width());
    s.apply(c);
    return s;
}

/// alpha_x -> 2*mean - alpha_x over the given register, separately for
/// every assignment of the remaining qubits.
inline StateVector invert_about_mean(StateVector s, std::span<const Qubit> qubits) {
    const std::uint64_t reg = detail::mask_of(qubits);
    const std::uint64_t count = std::uint64_t{1} << qubits.size();
    auto amps = s.amplitudes();
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & reg) continue;
        Amplitude sum{};
        for (std::uint64_t r = 0; r < count; ++r) sum += amps[detail::scatter_bits(base, qubits, r)];
        const Amplitude twice_mean = 2.0 * sum / static_cast<double>(count);
        for (std::uint64_t r = 0; r < count; ++r) {
            auto& a = amps[detail::scatter_bits(base, qubits, r)];
            a = twice_mean - a;
        }
    }
    return s;
}

/// Marginal distribution over `qubits`; entry index bit i is qubits[i].
inline std::vector<double> probabilities(const StateVector& s, std::span<const Qubit> qubits) {
    for (Qubit q : qubits) {
        if (q >= s.width()) throw InvalidArgument("probabilities: qubit " + std::to_string(q) + " out of range");
    }
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = s.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) out[detail::gather_bits(i, qubits)] += std::norm(amps[i]);
    return out;
}

inline std::vector<double> probabilities(const StateVector& s) {
    std::vector<double> out(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) out[i] = std::norm(s[i]);
    return out;
}

}  // namespace qnr
