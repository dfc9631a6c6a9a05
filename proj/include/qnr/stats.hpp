#pragma once

/**
 * @file stats.hpp
 * @brief Success rate, chi-square uniformity and plot export for runs.
 *
 * A run of `shots` measurements has k nonresidue outcomes. The success rate
 * is k/shots; uniformity is judged over the m = (p-1)/2 nonresidues only:
 *
 *     chi2 = sum_i (O_i - k/m)^2 / (k/m),   dof = m - 1.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnr/error.hpp"
#include "qnr/numtheory.hpp"
#include "qnr/sampling.hpp"

namespace qnr {

/// Pure noise: half of the outcomes below 2^n are nonresidues, roughly.
inline constexpr double kNoiseFloor = 0.5;
/// Best classical rate with one Jacobi evaluation.
inline constexpr double kClassicalBound = 0.75;
/// p-values below this are drawn at this level.
inline constexpr double kPValueFloor = 1e-6;

/// Regularized upper incomplete gamma Q(a, x).
inline double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw InvalidArgument("regularized_gamma_q: a must be positive");
    if (!(x >= 0.0)) throw InvalidArgument("regularized_gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    constexpr double eps = 1e-16;
    constexpr int max_iter = 100000;

    if (x < a + 1.0) {
        // P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < max_iter; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        return std::clamp(1.0 - sum * std::exp(log_prefix), 0.0, 1.0);
    }

    // Modified Lentz on the continued fraction for Q.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

/// Upper-tail probability of a chi-square statistic.
inline double chi2_pvalue(double chi2, unsigned dof) {
    if (dof == 0) throw InvalidArgument("chi2_pvalue: dof must be positive");
    if (!(chi2 >= 0.0)) throw InvalidArgument("chi2_pvalue: chi2 must be non-negative");
    return regularized_gamma_q(0.5 * dof, 0.5 * chi2);
}

struct ScoreReport {
    std::uint64_t prime = 0;
    std::uint64_t shots = 0;
    std::uint64_t k = 0;
    double success_rate = 0.0;
    std::vector<std::uint64_t> qnrs;      ///< category labels, ascending
    std::vector<std::uint64_t> observed;  ///< O_i per entry of qnrs
    double expected = 0.0;                ///< E_i = k/m
    std::optional<double> chi2;           ///< empty when k = 0
    unsigned dof = 0;
    std::optional<double> p_value;
    std::optional<double> p_value_plot;  ///< max(p_value, 1e-6)
    std::string device;
    std::string timestamp;

    bool beats_noise_floor() const { return success_rate > kNoiseFloor; }
    bool beats_classical() const { return success_rate > kClassicalBound; }
};

/// Scores a run against prime p. Counts must sum to `shots`; bitstrings
/// wider than the register of p are rejected.
inline ScoreReport score(const RunResult& r, std::uint64_t p) {
    detail::require_odd_prime(p, "score");
    if (p < 5) throw InvalidArgument("score: p must be at least 5 for a chi-square test");
    if (r.prime != 0 && r.prime != p) {
        throw InvalidArgument("score: run is for p = " + std::to_string(r.prime) + ", not " + std::to_string(p));
    }
    if (r.shots == 0) throw InvalidArgument("score: zero shots");

    ScoreReport rep;
    rep.prime = p;
    rep.shots = r.shots;
    rep.device = r.device;
    rep.timestamp = r.timestamp;
    rep.qnrs = qnr_set(p);
    rep.observed.assign(rep.qnrs.size(), 0);
    const unsigned width = register_bits(p);

    std::uint64_t total = 0;
    for (const auto& [bits, n] : r.counts) {
        const std::uint64_t x = from_bitstring(bits);
        if (bits.size() > width) {
            throw InvalidArgument("score: bitstring '" + bits + "' is wider than the " + std::to_string(width) +
                                  "-bit register for p = " + std::to_string(p));
        }
        total += n;
        const auto it = std::lower_bound(rep.qnrs.begin(), rep.qnrs.end(), x);
        if (it != rep.qnrs.end() && *it == x) {
            rep.observed[static_cast<std::size_t>(it - rep.qnrs.begin())] += n;
            rep.k += n;
        }
    }
    if (total != r.shots) {
        throw InvalidArgument("score: counts sum to " + std::to_string(total) + " but shots is " +
                              std::to_string(r.shots));
    }

    const auto m = static_cast<double>(rep.qnrs.size());
    rep.success_rate = static_cast<double>(rep.k) / static_cast<double>(rep.shots);
    rep.dof = static_cast<unsigned>(rep.qnrs.size() - 1);
    rep.expected = static_cast<double>(rep.k) / m;
    if (rep.k > 0) {
        double chi2 = 0.0;
        for (auto o : rep.observed) {
            const double diff = static_cast<double>(o) - rep.expected;
            chi2 += diff * diff / rep.expected;
        }
        rep.chi2 = chi2;
        rep.p_value = chi2_pvalue(chi2, rep.dof);
        rep.p_value_plot = std::max(*rep.p_value, kPValueFloor);
    }
    return rep;
}

inline nlohmann::ordered_json to_json(const ScoreReport& s) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
    nlohmann::ordered_json j;
    j["prime"] = s.prime;
    j["shots"] = s.shots;
    j["k"] = s.k;
    j["success_rate"] = s.success_rate;
    j["beats_noise_floor"] = s.beats_noise_floor();
    j["beats_classical"] = s.beats_classical();
    j["qnrs"] = s.qnrs;
    j["observed"] = s.observed;
    j["expected"] = s.expected;
    j["chi2"] = opt(s.chi2);
    j["dof"] = s.dof;
    j["p_value"] = opt(s.p_value);
    j["p_value_plot"] = opt(s.p_value_plot);
    j["device"] = s.device;
    j["timestamp"] = s.timestamp;
    return j;
}

namespace detail {

inline std::string fmt6g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// CSV with one row per report: device,score,p_value_plot,logit(p_value_plot).
/// Devices are ordered by median score, highest first (ties by name); rows
/// keep their input order within a device. Runs with no nonresidue leave
/// the two p-value columns empty.
inline std::string plot_data(const std::vector<std::pair<std::string, ScoreReport>>& reports) {
    if (reports.empty()) throw InvalidArgument("plot_data: no reports");
    std::map<std::string, std::vector<double>> scores;
    for (const auto& [device, rep] : reports) scores[device].push_back(rep.success_rate);
    std::vector<std::pair<double, std::string>> order;
    for (const auto& [device, v] : scores) order.emplace_back(detail::median(v), device);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::string csv = "device,score,p_value_plot,logit(p_value_plot)\n";
    for (const auto& [med, device] : order) {
        for (const auto& [name, rep] : reports) {
            if (name != device) continue;
            csv += name + "," + detail::fmt6g(rep.success_rate) + ",";
            if (rep.p_value_plot) {
                const double pv = *rep.p_value_plot;
                csv += detail::fmt6g(pv) + "," + detail::fmt6g(std::log(pv / (1.0 - pv)));
            } else {
                csv += ",";
            }
            csv += "\n";
        }
    }
    return csv;
}

}  // namespace qnr
