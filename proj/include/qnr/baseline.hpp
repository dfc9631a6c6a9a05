#pragma once

/**
 * @file baseline.hpp
 * @brief Classical nonresidue samplers that set the benchmark thresholds.
 *
 * With one Jacobi evaluation allowed, the best known strategy checks one
 * random candidate and otherwise guesses: success 1/2 + 1/4 = 3/4. With a
 * known nonresidue as advice, a * r^2 is always a nonresidue.
 */

#include <cstdint>
#include <numeric>
#include <random>
#include <string>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"
#include "qnr/numtheory.hpp"
#include "qnr/synth.hpp"

namespace qnr {

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational reduced(std::uint64_t num, std::uint64_t den) {
        const auto g = std::gcd(num, den);
        return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    bool operator==(const Rational&) const = default;
};

struct BaselineOutcome {
    std::uint64_t candidate = 0;
    /// Ground truth for scoring; not one of the sampler's Jacobi calls.
    bool is_qnr = false;
    unsigned jacobi_calls_used = 0;
};

namespace detail {

/// Uniform in [0, n) by rejection; the same stream on every platform.
template <class URBG>
std::uint64_t uniform_below(URBG& rng, std::uint64_t n) {
    static_assert(URBG::min() == 0 && URBG::max() == ~std::uint64_t{0}, "needs a full 64-bit generator");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

inline bool is_nonresidue(std::uint64_t x, std::uint64_t p) {
    return jacobi(static_cast<std::int64_t>(x), static_cast<std::int64_t>(p)) == -1;
}

}  // namespace detail

/// Check one uniform candidate; if it is a residue, return a fresh unchecked one.
template <class URBG>
BaselineOutcome algorithm2_sample(std::uint64_t p, URBG& rng) {
    detail::require_odd_prime(p, "algorithm2_sample");
    BaselineOutcome out;
    const std::uint64_t x = 1 + detail::uniform_below(rng, p - 1);
    out.jacobi_calls_used = 1;
    if (detail::is_nonresidue(x, p)) {
        out.candidate = x;
    } else {
        out.candidate = 1 + detail::uniform_below(rng, p - 1);
    }
    out.is_qnr = detail::is_nonresidue(out.candidate, p);
    return out;
}

inline BaselineOutcome algorithm2_sample(std::uint64_t p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return algorithm2_sample(p, rng);
}

/// Fraction of `trials` seeded runs that returned a nonresidue.
inline double algorithm2_success_rate(std::uint64_t p, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw InvalidArgument("algorithm2_success_rate: trials must be positive");
    std::mt19937_64 rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) hits += algorithm2_sample(p, rng).is_qnr ? 1u : 0u;
    return static_cast<double>(hits) / static_cast<double>(trials);
}

/// Exact success probability, enumerating x and, after a residue, y.
inline Rational algorithm2_exact_success(std::uint64_t p) {
    detail::require_odd_prime(p, "algorithm2_exact_success");
    std::uint64_t nonresidues = 0;
    for (std::uint64_t x = 1; x < p; ++x) nonresidues += detail::is_nonresidue(x, p) ? 1u : 0u;
    const std::uint64_t residues = (p - 1) - nonresidues;
    // Each x weighs (p-1) y-draws: a nonresidue wins on all of them, a residue on `nonresidues` of them.
    const std::uint64_t wins = nonresidues * (p - 1) + residues * nonresidues;
    return Rational::reduced(wins, (p - 1) * (p - 1));
}

/// advice * r^2 mod p.
inline std::uint64_t algorithm4_image(std::uint64_t p, std::uint64_t advice, std::uint64_t r) {
    return detail::mul_mod(advice % p, detail::mul_mod(r % p, r % p, p), p);
}

template <class URBG>
std::uint64_t algorithm4_sample(std::uint64_t p, std::uint64_t advice, URBG& rng) {
    detail::require_odd_prime(p, "algorithm4_sample");
    if (!detail::is_nonresidue(advice, p)) {
        throw InvalidArgument("advice " + std::to_string(advice) + " is not a nonresidue mod " + std::to_string(p));
    }
    return algorithm4_image(p, advice, 1 + detail::uniform_below(rng, p - 1));
}

inline std::uint64_t algorithm4_sample(std::uint64_t p, std::uint64_t advice, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return algorithm4_sample(p, advice, rng);
}

/// Runs the p = 17 indicator permutation backwards on (x3, x2, x1, x0) =
/// (a, b, coordinate, c). With coordinate 1 the result is a nonresidue.
inline std::uint64_t qnr17_reverse_trick(bool a, bool b, bool c, bool coordinate = true) {
    static const Circuit inverse = [] {
        SynthConfig cfg;
        return reversed(synthesize_indicator_permutation(indicator_truth_table(17, 4), cfg).circuit);
    }();
    const std::uint64_t input = (std::uint64_t{a} << 3) | (std::uint64_t{b} << 2) | (std::uint64_t{coordinate} << 1) |
                                std::uint64_t{c};
    return reversible_apply(inverse, input);
}

}  // namespace qnr
