#pragma once

/**
 * @file qasm.hpp
 * @brief OpenQASM 2.0 emitter and parser for lowered circuits.
 *
 * The accepted subset is documented in docs/qasm-subset.md. In short: one
 * qreg, at most one creg, gates h x s sdg t tdg u1 cx cz, and terminal
 * `measure q[i] -> c[j];` statements.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnr/circuit.hpp"
#include "qnr/error.hpp"
#include "qnr/lower.hpp"

namespace qnr {

/// Largest register the parser will declare.
inline constexpr std::uint64_t kMaxQasmRegister = 1024;

/// `phi` as text: "pi", "-pi/8", "3*pi/4", "0" when phi = k pi / 2^j with
/// j <= 20, otherwise a round-trippable 17-digit literal.
inline std::string format_angle(double phi) {
    constexpr int max_j = 20;
    const double scaled = phi / std::numbers::pi * std::ldexp(1.0, max_j);
    if (std::isfinite(scaled) && std::abs(scaled) < 1e15) {
        const double k_round = std::nearbyint(scaled);
        if (std::abs(phi - k_round * std::numbers::pi / std::ldexp(1.0, max_j)) <= 1e-13) {
            auto k = static_cast<long long>(k_round);
            if (k == 0) return "0";
            int j = max_j;
            while (j > 0 && k % 2 == 0) {
                k /= 2;
                --j;
            }
            std::string s = k < 0 ? "-" : "";
            const long long mag = k < 0 ? -k : k;
            if (mag != 1) s += std::to_string(mag) + "*";
            s += "pi";
            if (j > 0) s += "/" + std::to_string(1LL << j);
            return s;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", phi);
    return buf;
}

/// QASM text for a lowered circuit; measures metadata().measured (or every
/// qubit) into c[0..].
inline std::string emit_qasm(const Circuit& c) {
    require_valid(c);
    if (!is_lowered(c)) {
        for (const auto& g : c.gates()) {
            if (!is_lowered(Circuit(c.width()).add(g))) {
                throw UnsupportedGate("emit_qasm: " + std::string(to_string(g.kind)) +
                                      " must be lowered before emission");
            }
        }
    }
    const auto measured = c.measured_qubits();
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out += "qreg q[" + std::to_string(c.width()) + "];\n";
    out += "creg c[" + std::to_string(measured.size()) + "];\n";
    auto q = [](Qubit i) { return "q[" + std::to_string(i) + "]"; };
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::h: out += "h " + q(g.qubits[0]) + ";\n"; break;
            case GateKind::x: out += "x " + q(g.qubits[0]) + ";\n"; break;
            case GateKind::phase: out += "u1(" + format_angle(g.angle) + ") " + q(g.qubits[0]) + ";\n"; break;
            case GateKind::cnot: out += "cx " + q(g.qubits[0]) + "," + q(g.qubits[1]) + ";\n"; break;
            case GateKind::cz: out += "cz " + q(g.qubits[0]) + "," + q(g.qubits[1]) + ";\n"; break;
            default: break;
        }
    }
    for (std::size_t j = 0; j < measured.size(); ++j) {
        out += "measure " + q(measured[j]) + " -> c[" + std::to_string(j) + "];\n";
    }
    return out;
}

namespace detail {

class QasmParser {
public:
    explicit QasmParser(std::string_view text) : src_(text) {}

    Circuit parse() {
        skip_space();
        expect_word("OPENQASM");
        const auto [vl, vc] = pos();
        const double version = number();
        if (version != 2.0) fail_at(vl, vc, "only OPENQASM 2.0 is supported");
        expect(';');
        if (peek_word() == "include") {
            word();
            const auto [il, ic] = pos();
            if (string_literal() != "qelib1.inc") fail_at(il, ic, "only qelib1.inc may be included");
            expect(';');
        }

        while (!at_end()) statement();
        if (!qreg_) fail("missing qreg declaration");

        Circuit c(static_cast<unsigned>(qreg_->size));
        for (auto& g : gates_) c.add(std::move(g));
        if (any_measure_) {
            std::vector<Qubit> measured(creg_->size);
            for (std::uint64_t j = 0; j < creg_->size; ++j) {
                if (!measures_[j]) throw ParseError("register mismatch: c[" + std::to_string(j) + "] is never measured");
                measured[j] = *measures_[j];
            }
            c.metadata().measured = std::move(measured);
        }
        return c;
    }

private:
    struct Register {
        std::string name;
        std::uint64_t size;
    };

    [[noreturn]] void fail(const std::string& what) const { fail_at(line_, col_, what); }
    [[noreturn]] static void fail_at(std::size_t line, std::size_t col, const std::string& what) {
        throw ParseError(what, static_cast<int>(line), static_cast<int>(col));
    }

    std::pair<std::size_t, std::size_t> pos() const { return {line_, col_}; }
    bool at_end() const { return i_ >= src_.size(); }
    char cur() const { return at_end() ? '\0' : src_[i_]; }

    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    void skip_space() {
        while (!at_end()) {
            const char ch = cur();
            if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
                advance();
            } else if (ch == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (!at_end() && cur() != '\n') advance();
            } else {
                break;
            }
        }
    }

    static bool ident_start(char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; }
    static bool ident_char(char ch) { return ident_start(ch) || (ch >= '0' && ch <= '9'); }

    std::string peek_word() const {
        std::size_t j = i_;
        while (j < src_.size() && ident_char(src_[j])) ++j;
        return (i_ < src_.size() && ident_start(src_[i_])) ? std::string(src_.substr(i_, j - i_)) : std::string{};
    }

    std::string word() {
        if (!ident_start(cur())) fail("expected an identifier");
        const std::size_t start = i_;
        while (!at_end() && ident_char(cur())) advance();
        std::string w(src_.substr(start, i_ - start));
        skip_space();
        return w;
    }

    void expect_word(std::string_view w) {
        if (peek_word() != w) fail("expected '" + std::string(w) + "'");
        word();
    }

    void expect(char ch) {
        if (at_end()) fail(std::string("expected '") + ch + "' before end of input");
        if (cur() != ch) fail(std::string("expected '") + ch + "'");
        advance();
        skip_space();
    }

    bool accept(char ch) {
        if (cur() != ch) return false;
        advance();
        skip_space();
        return true;
    }

    std::string string_literal() {
        if (cur() != '"') fail("expected a string literal");
        advance();
        const std::size_t start = i_;
        while (!at_end() && cur() != '"' && cur() != '\n') advance();
        if (cur() != '"') fail("unterminated string literal");
        std::string s(src_.substr(start, i_ - start));
        advance();
        skip_space();
        return s;
    }

    double number() {
        const std::size_t start = i_;
        while (!at_end() && ((cur() >= '0' && cur() <= '9') || cur() == '.')) advance();
        if ((cur() == 'e' || cur() == 'E') && i_ > start) {
            advance();
            if (cur() == '+' || cur() == '-') advance();
            while (!at_end() && cur() >= '0' && cur() <= '9') advance();
        }
        const std::string tok(src_.substr(start, i_ - start));
        if (tok.empty()) fail("expected a number");
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || !std::isfinite(v)) fail("malformed number '" + tok + "'");
        skip_space();
        return v;
    }

    std::uint64_t integer() {
        const std::size_t start = i_;
        while (!at_end() && cur() >= '0' && cur() <= '9') advance();
        std::uint64_t v = 0;
        const auto* b = src_.data() + start;
        const auto* e = src_.data() + i_;
        if (b == e) fail("expected an integer");
        if (std::from_chars(b, e, v).ec != std::errc{}) fail("integer out of range");
        skip_space();
        return v;
    }

    // expr := term (('+' | '-') term)*
    double expr(int depth = 0) {
        if (depth > 64) fail("expression nested too deeply");
        double v = term(depth);
        for (;;) {
            if (accept('+')) {
                v += term(depth);
            } else if (accept('-')) {
                v -= term(depth);
            } else {
                return v;
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    double term(int depth) {
        double v = unary(depth);
        for (;;) {
            if (accept('*')) {
                v *= unary(depth);
            } else if (cur() == '/') {
                advance();
                skip_space();
                const auto [l, c] = pos();
                const double d = unary(depth);
                if (d == 0.0) fail_at(l, c, "division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    double unary(int depth) {
        if (accept('-')) return -unary(depth + 1);
        if (accept('+')) return unary(depth + 1);
        if (accept('(')) {
            const double v = expr(depth + 1);
            expect(')');
            return v;
        }
        if (peek_word() == "pi") {
            word();
            return std::numbers::pi;
        }
        return number();
    }

    Qubit qubit_arg() {
        const auto [l, c] = pos();
        const std::string name = word();
        if (!qreg_) fail_at(l, c, "qubit used before any qreg declaration");
        if (name != qreg_->name) fail_at(l, c, "register mismatch: unknown quantum register '" + name + "'");
        expect('[');
        const auto [il, ic] = pos();
        const std::uint64_t idx = integer();
        if (idx >= qreg_->size) {
            fail_at(il, ic, "register mismatch: " + name + "[" + std::to_string(idx) + "] is outside " + name + "[" +
                                std::to_string(qreg_->size) + "]");
        }
        expect(']');
        return static_cast<Qubit>(idx);
    }

    Register declaration() {
        const std::string name = word();
        expect('[');
        const auto [l, c] = pos();
        const std::uint64_t size = integer();
        if (size == 0 || size > kMaxQasmRegister) fail_at(l, c, "register size must be 1.." + std::to_string(kMaxQasmRegister));
        expect(']');
        expect(';');
        return {name, size};
    }

    void statement() {
        const auto [l, c] = pos();
        const std::string kw = word();
        if (kw == "qreg") {
            if (qreg_) fail_at(l, c, "register mismatch: only one qreg is supported");
            qreg_ = declaration();
            return;
        }
        if (kw == "creg") {
            if (creg_) fail_at(l, c, "register mismatch: only one creg is supported");
            creg_ = declaration();
            measures_.assign(creg_->size, std::nullopt);
            return;
        }
        if (kw == "measure") {
            measure(l, c);
            return;
        }
        if (any_measure_) fail_at(l, c, "gates after measurement are not supported");
        gate(kw, l, c);
    }

    void measure(std::size_t l, std::size_t c) {
        const Qubit qb = qubit_arg();
        expect('-');
        expect('>');
        const auto [nl, nc] = pos();
        const std::string name = word();
        if (!creg_ || name != creg_->name) fail_at(nl, nc, "register mismatch: unknown classical register '" + name + "'");
        expect('[');
        const auto [il, ic] = pos();
        const std::uint64_t idx = integer();
        if (idx >= creg_->size) fail_at(il, ic, "register mismatch: classical bit out of range");
        expect(']');
        expect(';');
        if (measures_[idx]) fail_at(l, c, "classical bit c[" + std::to_string(idx) + "] measured twice");
        for (const auto& m : measures_) {
            if (m && *m == qb) fail_at(l, c, "qubit q[" + std::to_string(qb) + "] measured twice");
        }
        measures_[idx] = qb;
        any_measure_ = true;
    }

    void gate(const std::string& name, std::size_t l, std::size_t c) {
        struct Spec {
            std::string_view name;
            unsigned arity;
            bool takes_angle;
        };
        static constexpr Spec specs[] = {{"h", 1, false},  {"x", 1, false},   {"s", 1, false},
                                         {"sdg", 1, false}, {"t", 1, false},  {"tdg", 1, false},
                                         {"u1", 1, true},  {"cx", 2, false}, {"cz", 2, false}};
        const Spec* spec = nullptr;
        for (const auto& s : specs) {
            if (s.name == name) spec = &s;
        }
        if (spec == nullptr) throw UnsupportedGate(std::to_string(l) + ":" + std::to_string(c) + ": unsupported gate '" + name + "'");

        double angle = 0.0;
        if (spec->takes_angle) {
            expect('(');
            angle = expr();
            expect(')');
            if (!std::isfinite(angle)) fail_at(l, c, "angle is not finite");
        }
        std::vector<Qubit> qs{qubit_arg()};
        while (accept(',')) qs.push_back(qubit_arg());
        expect(';');
        if (qs.size() != spec->arity) {
            fail_at(l, c, "'" + name + "' takes " + std::to_string(spec->arity) + " qubit(s), got " + std::to_string(qs.size()));
        }
        if (qs.size() == 2 && qs[0] == qs[1]) fail_at(l, c, "duplicate qubit in '" + name + "'");

        constexpr double pi = std::numbers::pi;
        if (name == "h") gates_.push_back(Gate::h(qs[0]));
        else if (name == "x") gates_.push_back(Gate::x(qs[0]));
        else if (name == "s") gates_.push_back(Gate::phase(qs[0], pi / 2));
        else if (name == "sdg") gates_.push_back(Gate::phase(qs[0], -pi / 2));
        else if (name == "t") gates_.push_back(Gate::phase(qs[0], pi / 4));
        else if (name == "tdg") gates_.push_back(Gate::phase(qs[0], -pi / 4));
        else if (name == "u1") gates_.push_back(Gate::phase(qs[0], angle));
        else if (name == "cx") gates_.push_back(Gate::cnot(qs[0], qs[1]));
        else gates_.push_back(Gate::cz(qs[0], qs[1]));
    }

    std::string_view src_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    std::optional<Register> qreg_;
    std::optional<Register> creg_;
    std::vector<std::optional<Qubit>> measures_;
    bool any_measure_ = false;
    std::vector<Gate> gates_;
};

}  // namespace detail

/// Parses the supported subset. Throws ParseError (with line and column),
/// UnsupportedGate for gates outside the subset.
inline Circuit parse_qasm(std::string_view text) { return detail::QasmParser(text).parse(); }

}  // namespace qnr
