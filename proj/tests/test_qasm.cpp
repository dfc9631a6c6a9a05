#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qnr/lower.hpp"
#include "qnr/qasm.hpp"
#include "qnr/synth.hpp"

using namespace qnr;

namespace {

std::vector<double> register_distribution(const Circuit& c) { return probabilities(run(c), c.measured_qubits()); }

const char* kSmall = R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[2];
// comment
h q[0];
cx q[0],q[2];
u1(-3*pi/4 + (pi - pi)) q[1];
s q[2]; sdg q[2]; t q[0]; tdg q[1];
x q[1];
cz q[2],q[1];
measure q[2] -> c[0];
measure q[0] -> c[1];
)";

}  // namespace

TEST(FormatAngle, SymbolicAndLiteral) {
    EXPECT_EQ(format_angle(std::numbers::pi / 8), "pi/8");
    EXPECT_EQ(format_angle(-std::numbers::pi / 8), "-pi/8");
    EXPECT_EQ(format_angle(3 * std::numbers::pi / 8), "3*pi/8");
    EXPECT_EQ(format_angle(std::numbers::pi), "pi");
    EXPECT_EQ(format_angle(-2 * std::numbers::pi), "-2*pi");
    EXPECT_EQ(format_angle(0.0), "0");
    EXPECT_EQ(format_angle(0.5), "0.5");
    EXPECT_EQ(std::stod(format_angle(std::acos(-0.6))), std::acos(-0.6));
}

TEST(Emit, PhaseGateLine) {
    Circuit c(1);
    c.add(Gate::phase(0, std::numbers::pi / 8));
    EXPECT_EQ(emit_qasm(c),
              "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nu1(pi/8) q[0];\nmeasure q[0] -> c[0];\n");
}

TEST(Emit, RejectsUnloweredGates) {
    Circuit c(3);
    c.add(Gate::toffoli(0, 1, 2));
    EXPECT_THROW(emit_qasm(c), UnsupportedGate);
    Circuit d(2);
    d.add(Gate::phase(0, 0.1, {1}));
    EXPECT_THROW(emit_qasm(d), UnsupportedGate);
}

TEST(Parse, SmallProgram) {
    const auto c = parse_qasm(kSmall);
    EXPECT_EQ(c.width(), 3u);
    ASSERT_EQ(c.gates().size(), 9u);
    EXPECT_EQ(c.gates()[2].kind, GateKind::phase);
    EXPECT_DOUBLE_EQ(c.gates()[2].angle, -3 * std::numbers::pi / 4);
    EXPECT_DOUBLE_EQ(c.gates()[3].angle, std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(c.gates()[4].angle, -std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(c.gates()[5].angle, std::numbers::pi / 4);
    EXPECT_DOUBLE_EQ(c.gates()[6].angle, -std::numbers::pi / 4);
    EXPECT_EQ(c.metadata().measured, (std::vector<Qubit>{2, 0}));
}

TEST(Parse, Errors) {
    auto parse_error_at = [](const std::string& text, int line) {
        try {
            parse_qasm(text);
        } catch (const ParseError& e) {
            return e.line() == line;
        }
        return false;
    };
    const std::string head = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\n";
    EXPECT_TRUE(parse_error_at(head + "cx q[0],q[0];\n", 4));
    EXPECT_TRUE(parse_error_at(head + "h q[0]\nh q[1];\n", 5));
    EXPECT_TRUE(parse_error_at(head + "h q[2];\n", 4));
    EXPECT_TRUE(parse_error_at(head + "h r[0];\n", 4));
    EXPECT_TRUE(parse_error_at(head + "qreg r[2];\n", 4));
    EXPECT_TRUE(parse_error_at(head + "u1(pi/0) q[0];\n", 4));
    EXPECT_TRUE(parse_error_at(head + "u1(1e999) q[0];\n", 4));
    EXPECT_TRUE(parse_error_at("OPENQASM 3.0;\n", 1));
    EXPECT_TRUE(parse_error_at(head + "creg c[2];\nmeasure q[0] -> c[0];\nh q[0];\n", 6));
    EXPECT_THROW(parse_qasm(head + "ccx q[0],q[1],q[1];\n"), UnsupportedGate);
    EXPECT_THROW(parse_qasm(head + "creg c[2];\nmeasure q[0] -> c[0];\n"), ParseError);  // c[1] never set
    EXPECT_THROW(parse_qasm(""), ParseError);
}

TEST(RoundTrip, ReducedCircuit) {
    const auto lowered = lower(build_qnr17_reduced(), true);
    const auto text = emit_qasm(lowered);
    EXPECT_EQ(text, emit_qasm(lowered));
    const auto parsed = parse_qasm(text);
    EXPECT_EQ(emit_qasm(parsed), text);
    const auto p = probabilities(run(parsed));
    for (std::uint64_t x = 0; x < 16; ++x) {
        EXPECT_NEAR(p[x], jacobi(static_cast<std::int64_t>(x), 17) == -1 ? 0.125 : 0.0, 1e-9);
    }
}

TEST(RoundTrip, BenchmarkCircuitsPreserveDistributions) {
    std::vector<Circuit> circuits{build_qnr17_reduced(), build_fermat_circuit(ProblemInstance::from_prime(17)),
                                  build_general_circuit(ProblemInstance::from_prime(41)),
                                  build_general_circuit(ProblemInstance::from_prime(73))};
    for (const auto& c : circuits) {
        for (bool nn : {false, true}) {
            const auto lowered = lower(c, nn);
            const auto text = emit_qasm(lowered);
            const auto back = parse_qasm(text);
            EXPECT_EQ(emit_qasm(back), text);
            const auto a = register_distribution(lowered);
            const auto b = register_distribution(back);
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-9);
        }
    }
}

TEST(Fuzz, MutatedProgramsOnlyRaiseStructuredErrors) {
    const std::string base = emit_qasm(lower(build_qnr17_reduced(), true));
    const std::string alphabet = "qcxhzu1()[];,->/*+-. \n\"pisdgtOPENQASM0123456789eE";
    std::mt19937 rng(31337);
    int accepted = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string s = trial % 2 ? base : std::string(kSmall);
        const int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits && !s.empty(); ++e) {
            const std::size_t pos = rng() % s.size();
            switch (rng() % 4) {
                case 0: s.erase(pos, 1 + rng() % 3); break;
                case 1: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
                case 2: s[pos] = alphabet[rng() % alphabet.size()]; break;
                default: s[pos] = static_cast<char>(rng() % 256); break;
            }
        }
        try {
            parse_qasm(s);
            ++accepted;
        } catch (const Error&) {
        } catch (const std::exception& ex) {
            FAIL() << "unstructured exception: " << ex.what() << "\n" << s;
        }
    }
    EXPECT_GT(accepted, 0);
}
