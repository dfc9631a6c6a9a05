#pragma once

/**
 * @file sampling.hpp
 * @brief Measurement sampling, Pauli-noise trajectories and the RunResult record.
 *
 * RunResult is the interchange format between the simulator and the scorer
 * and doubles as the ingestion format for counts collected on hardware:
 *
 *     {"prime": 17, "shots": 1000, "counts": {"0011": 130, ...},
 *      "device": "statevector", "timestamp": "2024-03-01T12:00:00Z"}
 *
 * Count keys are bitstrings printed most-significant bit first, where bit j
 * is the j-th measured qubit.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"
#include "qnr/statevector.hpp"

namespace qnr {

/// Placeholder timestamp so that simulator output is byte-reproducible.
inline constexpr const char* kDefaultTimestamp = "1970-01-01T00:00:00Z";

struct RunResult {
    std::uint64_t prime = 0;  ///< 0 when unknown
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;
    std::string device;
    std::string timestamp = kDefaultTimestamp;

    bool operator==(const RunResult&) const = default;
};

/// `value` as a `bits`-character string, most significant bit first.
inline std::string to_bitstring(std::uint64_t value, std::size_t bits) {
    std::string s(bits, '0');
    for (std::size_t i = 0; i < bits; ++i) {
        if ((value >> i) & 1u) s[bits - 1 - i] = '1';
    }
    return s;
}

/// Inverse of to_bitstring. Throws ParseError on anything but 1..63 binary digits.
inline std::uint64_t from_bitstring(const std::string& bits) {
    if (bits.empty() || bits.size() > 63) throw ParseError("malformed bitstring '" + bits + "'");
    std::uint64_t v = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw ParseError("malformed bitstring '" + bits + "'");
        v = (v << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return v;
}

struct NoiseModel {
    enum class Kind { none, depolarizing, bitflip_readout };

    Kind kind = Kind::none;
    /// Per gate-qubit (depolarizing) or per measured bit (readout).
    double epsilon = 0.0;

    static NoiseModel none() { return {}; }
    static NoiseModel depolarizing(double eps) { return checked({Kind::depolarizing, eps}); }
    static NoiseModel readout(double eps) { return checked({Kind::bitflip_readout, eps}); }

    /// "none", "depolarizing:EPS" or "readout:EPS".
    static NoiseModel parse(const std::string& spec) {
        if (spec.empty() || spec == "none") return none();
        const auto colon = spec.find(':');
        if (colon == std::string::npos) throw InvalidArgument("noise spec '" + spec + "' lacks ':EPS'");
        const std::string name = spec.substr(0, colon);
        double eps = 0.0;
        try {
            std::size_t used = 0;
            eps = std::stod(spec.substr(colon + 1), &used);
            if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("noise spec '" + spec + "' has a malformed epsilon");
        }
        if (name == "depolarizing") return depolarizing(eps);
        if (name == "readout") return readout(eps);
        throw InvalidArgument("unknown noise model '" + name + "'");
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::none: return "none";
            case Kind::depolarizing: os << "depolarizing:" << epsilon; break;
            case Kind::bitflip_readout: os << "readout:" << epsilon; break;
        }
        return os.str();
    }

private:
    static NoiseModel checked(NoiseModel m) {
        if (!(m.epsilon >= 0.0 && m.epsilon <= 1.0)) {
            throw InvalidArgument("noise epsilon must lie in [0, 1]");
        }
        return m;
    }
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class OutcomeSampler {
public:
    explicit OutcomeSampler(const std::vector<double>& probs) : cdf_(probs.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            cdf_[i] = acc;
            if (probs[i] > 0.0) last_ = i;
        }
    }

    std::uint64_t draw(std::mt19937_64& rng) const {
        const double u = unit_draw(rng) * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) return last_;
        return static_cast<std::uint64_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
    std::uint64_t last_ = 0;
};

}  // namespace detail

/// Multinomial draw of `shots` outcomes over `measured`; deterministic per seed.
inline RunResult sample(const StateVector& s, std::span<const Qubit> measured, std::uint64_t shots,
                        std::uint64_t seed) {
    if (shots == 0) throw InvalidArgument("sample: shots must be at least 1");
    const detail::OutcomeSampler sampler(probabilities(s, measured));
    std::mt19937_64 rng(seed);
    std::map<std::uint64_t, std::uint64_t> tally;
    for (std::uint64_t i = 0; i < shots; ++i) ++tally[sampler.draw(rng)];
    RunResult r;
    r.shots = shots;
    r.device = "statevector";
    for (auto [value, n] : tally) r.counts[to_bitstring(value, measured.size())] = n;
    return r;
}

/// Per-shot trajectories. Depolarizing noise inserts X, Y or Z (each with
/// probability eps/3) on every qubit a gate touches; readout noise flips
/// each measured bit with probability eps.
inline RunResult run_noisy(const Circuit& c, const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw InvalidArgument("run_noisy: shots must be at least 1");
    const auto measured = c.measured_qubits();
    const StateVector ideal = run(c);

    RunResult r;
    r.prime = c.metadata().prime.value_or(0);
    r.shots = shots;
    r.device = noise.kind == NoiseModel::Kind::none ? "statevector" : "statevector+" + noise.describe();

    if (noise.kind == NoiseModel::Kind::none) {
        auto base = sample(ideal, measured, shots, seed);
        r.counts = std::move(base.counts);
        return r;
    }

    std::mt19937_64 rng(seed);
    const detail::OutcomeSampler ideal_sampler(probabilities(ideal, measured));
    std::map<std::uint64_t, std::uint64_t> tally;

    struct Fault {
        std::size_t after_gate;
        Qubit qubit;
        char pauli;
    };
    std::vector<Fault> faults;

    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        std::uint64_t outcome = 0;
        if (noise.kind == NoiseModel::Kind::depolarizing) {
            faults.clear();
            for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
                for (Qubit q : c.gates()[gi].touched()) {
                    if (detail::unit_draw(rng) < noise.epsilon) {
                        constexpr char paulis[] = {'X', 'Y', 'Z'};
                        faults.push_back({gi, q, paulis[rng() % 3]});
                    }
                }
            }
            if (faults.empty()) {
                outcome = ideal_sampler.draw(rng);
            } else {
                StateVector s(c.width());
                std::size_t next = 0;
                for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
                    s.apply(c.gates()[gi]);
                    for (; next < faults.size() && faults[next].after_gate == gi; ++next) {
                        s.apply_pauli(faults[next].qubit, faults[next].pauli);
                    }
                }
                outcome = detail::OutcomeSampler(probabilities(s, measured)).draw(rng);
            }
        } else {
            outcome = ideal_sampler.draw(rng);
            for (std::size_t b = 0; b < measured.size(); ++b) {
                if (detail::unit_draw(rng) < noise.epsilon) outcome ^= std::uint64_t{1} << b;
            }
        }
        ++tally[outcome];
    }
    for (auto [value, n] : tally) r.counts[to_bitstring(value, measured.size())] = n;
    return r;
}

inline nlohmann::ordered_json to_json(const RunResult& r) {
    nlohmann::ordered_json j;
    j["prime"] = r.prime;
    j["shots"] = r.shots;
    j["counts"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.counts) j["counts"][k] = v;
    j["device"] = r.device;
    j["timestamp"] = r.timestamp;
    return j;
}

inline RunResult run_result_from_json(const nlohmann::json& j) {
    try {
        RunResult r;
        r.prime = j.value("prime", std::uint64_t{0});
        r.shots = j.at("shots").get<std::uint64_t>();
        for (const auto& [k, v] : j.at("counts").items()) {
            from_bitstring(k);
            r.counts[k] = v.get<std::uint64_t>();
        }
        r.device = j.value("device", std::string{});
        r.timestamp = j.value("timestamp", std::string{});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("RunResult JSON: ") + e.what());
    }
}

}  // namespace qnr
