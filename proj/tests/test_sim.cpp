#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qnr/sampling.hpp"
#include "qnr/statevector.hpp"
#include "qnr/stats.hpp"
#include "qnr/synth.hpp"

using namespace qnr;
using C = std::complex<double>;

namespace {

StateVector random_state(unsigned width, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    std::vector<C> a(std::size_t{1} << width);
    double norm = 0;
    for (auto& v : a) {
        v = C(n(rng), n(rng));
        norm += std::norm(v);
    }
    for (auto& v : a) v /= std::sqrt(norm);
    return StateVector(width, a);
}

std::vector<Qubit> range(unsigned n) {
    std::vector<Qubit> q(n);
    for (unsigned i = 0; i < n; ++i) q[i] = i;
    return q;
}

}  // namespace

TEST(Run, UniformSuperposition) {
    Circuit c(4);
    for (Qubit q = 0; q < 4; ++q) c.add(Gate::h(q));
    const auto s = run(c);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(s[i] - C(0.25, 0)), 0.0, 1e-15);
}

TEST(Run, WidthLimit) {
    EXPECT_THROW(run(Circuit(27)), WidthLimit);
    EXPECT_THROW(StateVector(30), WidthLimit);
}

TEST(Run, FermatStateBeforeInversion) {
    // After the phase kick and uncompute, amplitudes are i^((2 x0 + 1) g(x)) / 4.
    const auto full = build_fermat_circuit(ProblemInstance::from_prime(17));
    Circuit prefix(full.width());
    for (std::size_t i = 0; i < 8; ++i) prefix.add(full.gates()[i]);  // H x4, oracle, CZ, S, oracle
    ASSERT_EQ(full.gates()[7].kind, GateKind::oracle_indicator);
    const auto s = run(prefix);
    const auto g = indicator_truth_table(17, 4);
    for (std::uint64_t x = 0; x < 16; ++x) {
        const int power = g[x] ? static_cast<int>(2 * (x & 1u) + 1) : 0;
        const C expect = std::pow(C(0, 1), power) * 0.25;
        EXPECT_LT(std::abs(s[x] - expect), 1e-12) << x;
        EXPECT_LT(std::abs(s[x | 16u]), 1e-12);
    }
}

TEST(Run, NormPreservedAfterEveryGate) {
    for (auto c : {build_general_circuit(ProblemInstance::from_prime(41)), build_qnr17_reduced(),
                   build_fermat_circuit(ProblemInstance::from_prime(17)), build_basic_zeroflip()}) {
        StateVector s(c.width());
        for (const auto& g : c.gates()) {
            s.apply(g);
            ASSERT_NEAR(s.norm_squared(), 1.0, 1e-10);
        }
    }
}

TEST(Run, GeneralCircuitP41) {
    const auto c = build_general_circuit(ProblemInstance::from_prime(41));
    const auto p = probabilities(run(c), c.measured_qubits());
    const auto qnrs = qnr_set_bruteforce(41);
    double total = 0;
    for (auto x : qnrs) {
        EXPECT_NEAR(p[x], 0.05, 1e-12);
        total += p[x];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(InvertAboutMean, Examples) {
    std::vector<C> uniform(16, C(0.25, 0));
    const auto u = invert_about_mean(StateVector(4, uniform), range(4));
    for (std::size_t i = 0; i < 16; ++i) EXPECT_LT(std::abs(u[i] - C(0.25, 0)), 1e-15);

    // One marked amplitude among four: Grover's single step lands on it.
    std::vector<C> marked(4, C(0.5, 0));
    marked[2] = -0.5;
    const auto m = invert_about_mean(StateVector(2, marked), range(2));
    EXPECT_LT(std::abs(m[2] - C(1, 0)), 1e-15);
    EXPECT_LT(std::abs(m[0]), 1e-15);

    // With mean 1/(2 sqrt N), an amplitude of 1/sqrt N goes to zero.
    const double n = 16;
    std::vector<C> a(16, C(1 / std::sqrt(n), 0));
    for (std::size_t i = 0; i < 8; ++i) a[i] = C(0, 0);  // mean = 1/(2 sqrt N)
    const auto r = invert_about_mean(StateVector(4, a), range(4));
    EXPECT_LT(std::abs(r[15]), 1e-15);
}

TEST(InvertAboutMean, MatchesHadamardFlipZeroHadamardUpToSign) {
    std::mt19937_64 rng(1);
    const auto s = random_state(5, rng);
    const std::vector<Qubit> reg{0, 2, 3};
    auto direct = invert_about_mean(s, reg);
    auto circ = s;
    Circuit c(5);
    for (Qubit q : reg) c.add(Gate::h(q));
    c.add(Gate::flip_zero(reg));
    for (Qubit q : reg) c.add(Gate::h(q));
    circ.apply(c);
    for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_LT(std::abs(direct[i] + circ[i]), 1e-12);
}

TEST(InvertAboutMean, Involution) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto s = random_state(6, rng);
        const std::vector<Qubit> reg{1, 3, 4, 5};
        const auto twice = invert_about_mean(invert_about_mean(s, reg), reg);
        for (std::size_t i = 0; i < s.dim(); ++i) ASSERT_LT(std::abs(twice[i] - s[i]), 1e-10);
    }
}

TEST(Probabilities, Examples) {
    const auto p0 = probabilities(StateVector(4));
    EXPECT_EQ(p0[0], 1.0);
    for (std::size_t i = 1; i < 16; ++i) EXPECT_EQ(p0[i], 0.0);

    const auto red = probabilities(run(build_qnr17_reduced()));
    for (std::uint64_t x = 0; x < 16; ++x) {
        const bool q = jacobi(static_cast<std::int64_t>(x), 17) == -1;
        EXPECT_NEAR(red[x], q ? 0.125 : 0.0, 1e-12);
    }

    std::mt19937_64 rng(4);
    const auto s = random_state(6, rng);
    const auto m = probabilities(s, std::vector<Qubit>{5, 1});
    double t = 0;
    for (double v : m) {
        EXPECT_GE(v, 0.0);
        t += v;
    }
    EXPECT_NEAR(t, 1.0, 1e-10);
    EXPECT_THROW(probabilities(s, std::vector<Qubit>{6}), InvalidArgument);
}

TEST(Sample, DeterministicStateAndSeed) {
    Circuit c(3);
    c.add(Gate::x(0)).add(Gate::x(2));
    const auto r = sample(run(c), range(3), 500, 42);
    ASSERT_EQ(r.counts.size(), 1u);
    EXPECT_EQ(r.counts.at("101"), 500u);

    const auto red = run(build_qnr17_reduced());
    const auto a = sample(red, range(4), 1000, 7);
    const auto b = sample(red, range(4), 1000, 7);
    EXPECT_EQ(a, b);
    EXPECT_EQ(score(a, 17).success_rate, 1.0);
    EXPECT_THROW(sample(red, range(4), 0, 1), InvalidArgument);
}

TEST(Sample, MatchesDistribution) {
    const auto c = build_general_circuit(ProblemInstance::from_prime(41));
    const auto r = sample(run(c), c.measured_qubits(), 200000, 3);
    for (const auto& [bits, n] : r.counts) {
        EXPECT_TRUE(jacobi(static_cast<std::int64_t>(from_bitstring(bits)), 41) == -1) << bits;
        EXPECT_NEAR(static_cast<double>(n) / 200000.0, 0.05, 0.003);  // > 6 sigma
    }
    EXPECT_EQ(r.counts.size(), 20u);
}

TEST(Noise, ZeroEpsilonMatchesIdeal) {
    const auto c = build_qnr17_reduced();
    for (auto model : {NoiseModel::depolarizing(0.0), NoiseModel::readout(0.0)}) {
        const auto r = run_noisy(c, model, 4000, 5);
        EXPECT_EQ(score(r, 17).success_rate, 1.0);
    }
}

TEST(Noise, FullReadoutNoiseIsUniform) {
    const auto r = run_noisy(build_qnr17_reduced(), NoiseModel::readout(1.0), 10000, 8);
    EXPECT_NEAR(score(r, 17).success_rate, 0.5, 0.05);
}

TEST(Noise, DepolarizingDegradesMonotonically) {
    const auto c = build_qnr17_reduced();
    double prev = 1.0;
    for (double eps : {0.0, 0.01, 0.05, 0.2}) {
        const double rate = score(run_noisy(c, NoiseModel::depolarizing(eps), 10000, 17), 17).success_rate;
        const double two_sigma = 2 * std::sqrt(0.25 / 10000) * std::sqrt(2.0);
        EXPECT_LE(rate, prev + two_sigma) << eps;
        prev = rate;
    }
    EXPECT_LT(prev, 0.95);
}

TEST(Noise, Parse) {
    EXPECT_EQ(NoiseModel::parse("none").kind, NoiseModel::Kind::none);
    EXPECT_EQ(NoiseModel::parse("readout:0.25").epsilon, 0.25);
    EXPECT_EQ(NoiseModel::parse("depolarizing:1e-2").kind, NoiseModel::Kind::depolarizing);
    EXPECT_THROW(NoiseModel::parse("readout:1.5"), InvalidArgument);
    EXPECT_THROW(NoiseModel::parse("readout"), InvalidArgument);
    EXPECT_THROW(NoiseModel::parse("thermal:0.1"), InvalidArgument);
    EXPECT_THROW(NoiseModel::parse("readout:0.1x"), InvalidArgument);
}

TEST(RunResultJson, RoundTrip) {
    RunResult r;
    r.prime = 17;
    r.shots = 10;
    r.counts = {{"0011", 7}, {"0101", 3}};
    r.device = "statevector";
    const auto back = run_result_from_json(nlohmann::json::parse(to_json(r).dump()));
    EXPECT_EQ(back, r);
    EXPECT_THROW(run_result_from_json(nlohmann::json::parse(R"({"shots": 2, "counts": {"01x": 2}})")), ParseError);
    EXPECT_THROW(run_result_from_json(nlohmann::json::parse(R"({"counts": {}})")), ParseError);
}

TEST(Bitstrings, MsbFirst) {
    EXPECT_EQ(to_bitstring(3, 4), "0011");
    EXPECT_EQ(from_bitstring("1010"), 10u);
    EXPECT_THROW(from_bitstring(""), ParseError);
}
