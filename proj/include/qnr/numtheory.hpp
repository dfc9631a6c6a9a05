#pragma once

/**
 * @file numtheory.hpp
 * @brief Exact 64-bit number theory for the nonresidue benchmark.
 *
 * Jacobi symbols, quadratic-nonresidue enumeration (two independent
 * routes), deterministic primality and the amplitude-rotation angle that
 * makes a single inversion about the mean land exactly on the nonresidues.
 */

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qnr/error.hpp"

namespace qnr {

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the 12 prime bases are sufficient below 2^64.
inline bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t b : bases) {
        if (m == b) return true;
        if (m % b == 0) return false;
    }
    std::uint64_t d = m - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : bases) {
        std::uint64_t x = detail::pow_mod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mul_mod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Jacobi symbol (a/m) for odd positive m, by the binary algorithm.
///
/// Factors of two are stripped from the top argument using the
/// (2/m) = (-1)^((m^2-1)/8) rule; reciprocity flips the sign when both
/// arguments are 3 mod 4.
inline int jacobi(std::int64_t a, std::int64_t m) {
    if (m <= 0 || (m & 1) == 0) {
        throw InvalidArgument("jacobi: modulus must be odd and positive, got " + std::to_string(m));
    }
    auto n = static_cast<std::uint64_t>(m);
    std::int64_t r = a % m;
    if (r < 0) r += m;
    auto x = static_cast<std::uint64_t>(r);

    int sign = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const std::uint64_t n8 = n & 7;
            if (n8 == 3 || n8 == 5) sign = -sign;
        }
        std::swap(x, n);
        if ((x & 3) == 3 && (n & 3) == 3) sign = -sign;
        x %= n;
    }
    return n == 1 ? sign : 0;
}

namespace detail {

inline void require_odd_prime(std::uint64_t p, const char* who) {
    if (p == 2 || !is_prime(p)) {
        throw InvalidArgument(std::string(who) + ": " + std::to_string(p) + " is not an odd prime");
    }
}

}  // namespace detail

/// All nonresidues in [1, p-1], ascending.
inline std::vector<std::uint64_t> qnr_set(std::uint64_t p) {
    detail::require_odd_prime(p, "qnr_set");
    std::vector<std::uint64_t> out;
    out.reserve((p - 1) / 2);
    for (std::uint64_t x = 1; x < p; ++x) {
        if (jacobi(static_cast<std::int64_t>(x), static_cast<std::int64_t>(p)) == -1) out.push_back(x);
    }
    return out;
}

/// Same contract as qnr_set, computed by squaring every unit and taking the
/// complement. No Jacobi symbols involved.
inline std::vector<std::uint64_t> qnr_set_bruteforce(std::uint64_t p) {
    detail::require_odd_prime(p, "qnr_set_bruteforce");
    std::vector<bool> residue(p, false);
    for (std::uint64_t x = 1; x < p; ++x) residue[detail::mul_mod(x, x, p)] = true;
    std::vector<std::uint64_t> out;
    out.reserve((p - 1) / 2);
    for (std::uint64_t x = 1; x < p; ++x) {
        if (!residue[x]) out.push_back(x);
    }
    return out;
}

/// Least n with 2^n > p.
inline unsigned register_bits(std::uint64_t p) {
    unsigned n = 0;
    while (n < 64 && (std::uint64_t{1} << n) <= p) ++n;
    return n;
}

/// For a Fermat prime 2^(2^k)+1 returns 2^k, the register width of the
/// reduced circuit; 0 otherwise.
inline unsigned fermat_bits(std::uint64_t p) {
    if (p < 3) return 0;
    const std::uint64_t q = p - 1;
    if ((q & (q - 1)) != 0) return 0;
    unsigned e = 0;
    while ((std::uint64_t{1} << e) != q) ++e;
    if ((e & (e - 1)) != 0 || !is_prime(p)) return 0;
    return e;
}

/// theta = arccos(1 - 2^n / (p - 1)), with n minimal such that 2^n > p.
inline double rotation_angle(std::uint64_t p) {
    if (!is_prime(p) || p == 2) {
        throw InvalidArgument("rotation_angle: " + std::to_string(p) + " is not an odd prime");
    }
    if (p % 8 != 1) {
        throw UnsupportedPrime("rotation_angle: p = " + std::to_string(p) +
                               " is not 1 mod 8; -1 or 2 is already a nonresidue");
    }
    const double big_n = std::ldexp(1.0, static_cast<int>(register_bits(p)));
    return std::acos(1.0 - big_n / static_cast<double>(p - 1));
}

/// A benchmark prime together with everything derived from it.
struct ProblemInstance {
    std::uint64_t p = 0;
    unsigned n = 0;           ///< register bits, N/2 < p < N
    std::uint64_t big_n = 0;  ///< N = 2^n
    double theta = 0.0;
    bool is_fermat = false;
    unsigned fermat_bits = 0;  ///< 2^k for p = 2^(2^k)+1, else 0

    /// Throws InvalidArgument for non-primes or p >= 2^32 and
    /// UnsupportedPrime for primes not congruent to 1 mod 8.
    static ProblemInstance from_prime(std::uint64_t p) {
        if (p >= (std::uint64_t{1} << 32)) {
            throw InvalidArgument("prime " + std::to_string(p) + " exceeds the 32-bit benchmark range");
        }
        ProblemInstance inst;
        inst.theta = rotation_angle(p);
        inst.p = p;
        inst.n = register_bits(p);
        inst.big_n = std::uint64_t{1} << inst.n;
        inst.fermat_bits = qnr::fermat_bits(p);
        inst.is_fermat = inst.fermat_bits != 0;
        return inst;
    }
};

/// Entry x is true iff x < p and x is a nonresidue mod p.
///
/// `width` must satisfy 2^width >= p, or equal the Fermat register width
/// (for p = 2^(2^k)+1 every nonresidue is below 2^(2^k), and 0 stands in
/// for the dropped residue p-1).
inline std::vector<bool> indicator_truth_table(std::uint64_t p, unsigned width) {
    detail::require_odd_prime(p, "indicator_truth_table");
    if (width > 30) throw InvalidArgument("indicator_truth_table: width " + std::to_string(width) + " too large");
    const std::uint64_t size = std::uint64_t{1} << width;
    const bool fermat_form = fermat_bits(p) != 0 && width == fermat_bits(p);
    if (size < p && !fermat_form) {
        throw InvalidArgument("indicator_truth_table: 2^" + std::to_string(width) + " cannot index all residues of " +
                              std::to_string(p));
    }
    std::vector<bool> table(size, false);
    for (std::uint64_t x = 1; x < size && x < p; ++x) {
        table[x] = jacobi(static_cast<std::int64_t>(x), static_cast<std::int64_t>(p)) == -1;
    }
    return table;
}

}  // namespace qnr
