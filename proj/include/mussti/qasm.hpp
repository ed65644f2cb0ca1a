#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mussti/circuit.hpp"
#include "mussti/error.hpp"

namespace mussti {
namespace detail {

inline std::string strip_comments(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
            if (i < text.size()) out.push_back('\n');
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline bool starts_with_word(const std::string& s, std::string_view word) {
    if (s.size() < word.size() || s.compare(0, word.size(), word) != 0) return false;
    return s.size() == word.size() || !std::isalnum(static_cast<unsigned char>(s[word.size()]));
}

struct QubitRef {
    std::string reg;
    int index = -1;
};

inline QubitRef parse_qubit_ref(const std::string& token) {
    auto lb = token.find('[');
    auto rb = token.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb + 2 || rb + 1 != token.size())
        raise(ErrorKind::SyntaxError, "expected qubit reference of the form reg[i], got '" + token + "'");
    QubitRef ref;
    ref.reg = trim(std::string_view(token).substr(0, lb));
    const std::string num = trim(std::string_view(token).substr(lb + 1, rb - lb - 1));
    if (ref.reg.empty() || num.empty()) raise(ErrorKind::SyntaxError, "malformed qubit reference '" + token + "'");
    try {
        std::size_t pos = 0;
        ref.index = std::stoi(num, &pos);
        if (pos != num.size() || ref.index < 0) throw std::invalid_argument(num);
    } catch (const std::exception&) {
        raise(ErrorKind::SyntaxError, "malformed qubit index in '" + token + "'");
    }
    return ref;
}

inline std::vector<std::string> split_operands(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

} // namespace detail

/// Parse the OpenQASM 2.0 subset used by the scheduler: qreg declarations plus
/// one- and two-qubit gate applications. Parameterised gates keep their name
/// as the label and drop the angle list. `include`, `creg`, `barrier` and
/// `measure` statements are counted in the metadata tally and otherwise
/// ignored. Gates on three or more qubits and classically controlled
/// statements are rejected.
inline Circuit parse_qasm(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = detail::strip_comments(buffer.str());

    Circuit circuit;
    std::map<std::string, int> reg_base; // register name -> first flat index
    std::map<std::string, int> reg_size;

    std::size_t pos = 0;
    while (pos < text.size()) {
        auto semi = text.find(';', pos);
        std::string stmt = detail::trim(std::string_view(text).substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
        pos = semi == std::string::npos ? text.size() : semi + 1;
        if (stmt.empty()) continue;

        if (detail::starts_with_word(stmt, "OPENQASM")) continue;
        if (detail::starts_with_word(stmt, "include")) {
            ++circuit.meta.includes;
            continue;
        }
        if (detail::starts_with_word(stmt, "barrier")) {
            ++circuit.meta.barriers;
            continue;
        }
        if (detail::starts_with_word(stmt, "measure")) {
            ++circuit.meta.measurements;
            continue;
        }
        if (detail::starts_with_word(stmt, "creg")) {
            ++circuit.meta.classical_registers;
            continue;
        }
        if (detail::starts_with_word(stmt, "if"))
            raise(ErrorKind::UnsupportedGate, "classically controlled statement: '" + stmt + "'");
        if (detail::starts_with_word(stmt, "gate") || detail::starts_with_word(stmt, "opaque"))
            raise(ErrorKind::SyntaxError, "gate definitions are outside the supported subset");

        if (detail::starts_with_word(stmt, "qreg")) {
            std::string rest = detail::trim(std::string_view(stmt).substr(4));
            auto ref = detail::parse_qubit_ref(rest);
            if (ref.index < 1) raise(ErrorKind::SyntaxError, "qreg must declare at least one qubit");
            if (reg_base.count(ref.reg)) raise(ErrorKind::SyntaxError, "register '" + ref.reg + "' declared twice");
            reg_base[ref.reg] = circuit.num_qubits;
            reg_size[ref.reg] = ref.index;
            circuit.num_qubits += ref.index;
            continue;
        }

        // Gate application: name[(params)] operand{,operand}.
        std::size_t i = 0;
        while (i < stmt.size() && (std::isalnum(static_cast<unsigned char>(stmt[i])) || stmt[i] == '_')) ++i;
        if (i == 0) raise(ErrorKind::SyntaxError, "unrecognised statement: '" + stmt + "'");
        const std::string name = stmt.substr(0, i);
        std::string rest = detail::trim(std::string_view(stmt).substr(i));
        if (!rest.empty() && rest.front() == '(') {
            int depth = 0;
            std::size_t j = 0;
            for (; j < rest.size(); ++j) {
                if (rest[j] == '(') ++depth;
                if (rest[j] == ')' && --depth == 0) break;
            }
            if (depth != 0) raise(ErrorKind::SyntaxError, "unbalanced parameter list in '" + stmt + "'");
            rest = detail::trim(std::string_view(rest).substr(j + 1));
        }
        if (rest.empty()) raise(ErrorKind::SyntaxError, "gate '" + name + "' has no operands");

        auto operands = detail::split_operands(rest);
        if (operands.size() > 2)
            raise(ErrorKind::UnsupportedGate, "gate '" + name + "' acts on " + std::to_string(operands.size()) + " qubits");

        std::array<int, 2> qubits{-1, -1};
        for (std::size_t k = 0; k < operands.size(); ++k) {
            auto ref = detail::parse_qubit_ref(operands[k]);
            auto it = reg_base.find(ref.reg);
            if (it == reg_base.end()) raise(ErrorKind::SyntaxError, "unknown register '" + ref.reg + "'");
            if (ref.index >= reg_size[ref.reg])
                raise(ErrorKind::IndexError, "qubit " + ref.reg + "[" + std::to_string(ref.index) + "] out of range");
            qubits[k] = it->second + ref.index;
        }
        GateOp gate;
        gate.id = static_cast<int>(circuit.gates.size());
        gate.kind = operands.size() == 2 ? GateKind::TwoQubit : GateKind::OneQubit;
        gate.qubits = qubits;
        gate.label = name;
        if (gate.is_two_qubit() && gate.qubits[0] == gate.qubits[1])
            raise(ErrorKind::IndexError, "two-qubit gate '" + name + "' repeats operand q" + std::to_string(qubits[0]));
        circuit.gates.push_back(std::move(gate));
    }
    circuit.check_invariants();
    return circuit;
}

inline Circuit parse_qasm(const std::string& text) {
    std::istringstream in(text);
    return parse_qasm(in);
}

} // namespace mussti
