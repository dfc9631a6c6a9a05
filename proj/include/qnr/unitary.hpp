#pragma once

// Dense unitaries for equivalence checking. Columns are produced by running
// basis states through the simulator, so every gate kind is covered by the
// same kernels the simulator uses.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"
#include "qnr/statevector.hpp"

namespace qnr {

inline constexpr unsigned kMaxUnitaryWidth = 12;

namespace detail {

inline void require_unitary_width(unsigned width) {
    if (width > kMaxUnitaryWidth) {
        throw WidthLimit("dense unitary of width " + std::to_string(width) + " exceeds the limit of " +
                         std::to_string(kMaxUnitaryWidth));
    }
}

}  // namespace detail

/// Full-register unitary of a single gate.
inline Eigen::MatrixXcd gate_unitary(const Gate& g, unsigned width) {
    detail::require_unitary_width(width);
    Circuit c(width);
    c.add(g);
    require_valid(c);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << width);
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        auto s = StateVector::basis(width, static_cast<std::uint64_t>(col));
        s.apply(g);
        for (Eigen::Index row = 0; row < dim; ++row) u(row, col) = s[static_cast<std::size_t>(row)];
    }
    return u;
}

inline Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
    detail::require_unitary_width(c.width());
    require_valid(c);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.width());
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        auto s = StateVector::basis(c.width(), static_cast<std::uint64_t>(col));
        s.apply(c);
        for (Eigen::Index row = 0; row < dim; ++row) u(row, col) = s[static_cast<std::size_t>(row)];
    }
    return u;
}

/// True iff U_a = e^{i phi} U_b entrywise within `tol` for a single phi.
///
/// Compares column by column, so memory stays O(2^width) even at width 12.
inline bool equivalent_up_to_global_phase(const Circuit& a, const Circuit& b, double tol) {
    if (a.width() != b.width()) {
        throw InvalidArgument("equivalence check: widths differ (" + std::to_string(a.width()) + " vs " +
                              std::to_string(b.width()) + ")");
    }
    detail::require_unitary_width(a.width());
    require_valid(a);
    require_valid(b);

    bool have_phase = false;
    Amplitude phase{1.0, 0.0};
    const std::size_t dim = std::size_t{1} << a.width();
    for (std::size_t col = 0; col < dim; ++col) {
        auto sa = StateVector::basis(a.width(), col);
        auto sb = StateVector::basis(b.width(), col);
        sa.apply(a);
        sb.apply(b);
        if (!have_phase) {
            // Anchor the phase on the largest entry of the first column.
            std::size_t best = 0;
            for (std::size_t i = 1; i < dim; ++i) {
                if (std::abs(sb[i]) > std::abs(sb[best])) best = i;
            }
            if (std::abs(sa[best]) < 1e-12) return false;
            phase = sa[best] / sb[best];
            phase /= std::abs(phase);
            have_phase = true;
        }
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::abs(sa[i] - phase * sb[i]) > tol) return false;
        }
    }
    return true;
}

}  // namespace qnr
