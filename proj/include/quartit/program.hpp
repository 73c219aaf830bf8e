#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quartit/gates.hpp"

namespace quartit {

// Line-oriented pulse-program DSL, one statement per line:
//
//   H A | H B                 Hadamard on a logical qubit
//   CNOT A B | CNOT B A       CNOT, control listed first
//   RX|RY|RZ A|B <deg>        logical-qubit rotation, angle in degrees
//   SWAP                      swap the two logical qubits
//   P <X|Y|Z><lo><hi> <deg>   raw selective pulse, e.g. "P X01 90"
//   WAIT <seconds>            free evolution
//   PREP <00|01|10|11>        effective-pure-state preparation
//   # comment                 (also allowed after a statement)

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& what, int line_, int column_)
        : std::runtime_error("line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + what),
          line(line_),
          column(column_) {}
};

struct HadamardStmt {
    LogicalQubit qubit;
    bool operator==(const HadamardStmt&) const = default;
};
struct CnotStmt {
    LogicalQubit control;
    bool operator==(const CnotStmt&) const = default;
};
struct RotationStmt {
    Axis axis;
    LogicalQubit qubit;
    double angle_deg;
    bool operator==(const RotationStmt&) const = default;
};
struct SwapStmt {
    bool operator==(const SwapStmt&) const = default;
};
struct RawPulseStmt {
    int lo;
    int hi;
    Axis axis;
    double angle_deg;
    bool operator==(const RawPulseStmt&) const = default;
};
struct WaitStmt {
    double seconds;
    bool operator==(const WaitStmt&) const = default;
};
struct PrepStmt {
    int target;  // level index 0..3, i.e. "00".."11" read as binary
    bool operator==(const PrepStmt&) const = default;
};

using Statement = std::variant<HadamardStmt, CnotStmt, RotationStmt, SwapStmt,
                               RawPulseStmt, WaitStmt, PrepStmt>;

struct SourcedStatement {
    Statement stmt;
    int line = 0;
    std::string text;  // trimmed source line
};

struct GateProgram {
    std::vector<SourcedStatement> statements;

    /// Structural equality; source lines and text are presentation only.
    bool operator==(const GateProgram& other) const {
        if (statements.size() != other.statements.size()) return false;
        for (size_t i = 0; i < statements.size(); ++i)
            if (statements[i].stmt != other.statements[i].stmt) return false;
        return true;
    }
};

namespace detail {

struct Token {
    std::string text;
    int column;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        const size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        tokens.push_back({std::string(line.substr(start, i - start)),
                          static_cast<int>(start) + 1});
    }
    return tokens;
}

inline LogicalQubit parse_qubit(const Token& tok, int line) {
    if (tok.text == "A") return LogicalQubit::A;
    if (tok.text == "B") return LogicalQubit::B;
    throw ParseError("expected qubit A or B, got '" + tok.text + "'", line, tok.column);
}

inline double parse_number(const Token& tok, int line) {
    double value = 0.0;
    const char* begin = tok.text.data();
    const char* end = begin + tok.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("expected a number, got '" + tok.text + "'", line, tok.column);
    return value;
}

inline void expect_count(const std::vector<Token>& toks, size_t n, const char* what,
                         int line) {
    if (toks.size() != n)
        throw ParseError(std::string(what) + ": expected " + std::to_string(n - 1) +
                             " argument(s), got " + std::to_string(toks.size() - 1),
                         line, toks.empty() ? 1 : toks[0].column);
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline GateProgram parse_program(std::string_view text) {
    GateProgram prog;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        auto toks = detail::tokenize_line(line);
        if (toks.empty()) continue;
        const auto& head = toks[0];
        Statement stmt;

        if (head.text == "H") {
            detail::expect_count(toks, 2, "H", line_no);
            stmt = HadamardStmt{detail::parse_qubit(toks[1], line_no)};
        } else if (head.text == "CNOT") {
            detail::expect_count(toks, 3, "CNOT", line_no);
            const LogicalQubit control = detail::parse_qubit(toks[1], line_no);
            const LogicalQubit target = detail::parse_qubit(toks[2], line_no);
            if (control == target)
                throw ParseError("CNOT control and target must differ", line_no,
                                 toks[2].column);
            stmt = CnotStmt{control};
        } else if (head.text == "RX" || head.text == "RY" || head.text == "RZ") {
            detail::expect_count(toks, 3, head.text.c_str(), line_no);
            const Axis axis = head.text[1] == 'X'   ? Axis::X
                              : head.text[1] == 'Y' ? Axis::Y
                                                    : Axis::Z;
            stmt = RotationStmt{axis, detail::parse_qubit(toks[1], line_no),
                                detail::parse_number(toks[2], line_no)};
        } else if (head.text == "SWAP") {
            detail::expect_count(toks, 1, "SWAP", line_no);
            stmt = SwapStmt{};
        } else if (head.text == "P") {
            detail::expect_count(toks, 3, "P", line_no);
            const std::string& spec = toks[1].text;
            if (spec.size() != 3)
                throw ParseError("pulse spec must be <axis><lo><hi>, e.g. X01", line_no,
                                 toks[1].column);
            Axis axis;
            if (spec[0] == 'X')
                axis = Axis::X;
            else if (spec[0] == 'Y')
                axis = Axis::Y;
            else if (spec[0] == 'Z')
                axis = Axis::Z;
            else
                throw ParseError(std::string("unknown axis ") + spec[0], line_no,
                                 toks[1].column);
            if (!std::isdigit(static_cast<unsigned char>(spec[1])) ||
                !std::isdigit(static_cast<unsigned char>(spec[2])))
                throw ParseError("pulse levels must be digits", line_no, toks[1].column);
            const int lo = spec[1] - '0';
            const int hi = spec[2] - '0';
            if (lo > 3 || hi > 3 || lo >= hi)
                throw ParseError("pulse levels out of range: need 0 <= lo < hi <= 3",
                                 line_no, toks[1].column);
            stmt = RawPulseStmt{lo, hi, axis, detail::parse_number(toks[2], line_no)};
        } else if (head.text == "WAIT") {
            detail::expect_count(toks, 2, "WAIT", line_no);
            const double secs = detail::parse_number(toks[1], line_no);
            if (secs < 0.0) throw ParseError("WAIT duration must be >= 0", line_no,
                                             toks[1].column);
            stmt = WaitStmt{secs};
        } else if (head.text == "PREP") {
            detail::expect_count(toks, 2, "PREP", line_no);
            const std::string& t = toks[1].text;
            if (t != "00" && t != "01" && t != "10" && t != "11")
                throw ParseError("PREP target must be one of 00, 01, 10, 11", line_no,
                                 toks[1].column);
            stmt = PrepStmt{(t[0] - '0') * 2 + (t[1] - '0')};
        } else {
            throw ParseError("unknown mnemonic '" + head.text + "'", line_no, head.column);
        }

        std::string trimmed(line);
        const size_t b = trimmed.find_first_not_of(" \t\r");
        const size_t e = trimmed.find_last_not_of(" \t\r");
        trimmed = b == std::string::npos ? "" : trimmed.substr(b, e - b + 1);
        prog.statements.push_back({std::move(stmt), line_no, std::move(trimmed)});
    }
    return prog;
}

/// Render a program back to DSL text. Comments do not survive, but
/// parse(render(p)) reproduces p exactly (numbers use 17 significant
/// digits, enough for a double round trip).
inline std::string render_program(const GateProgram& prog) {
    std::ostringstream out;
    for (const auto& s : prog.statements) {
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, HadamardStmt>) {
                    out << "H " << (st.qubit == LogicalQubit::A ? 'A' : 'B');
                } else if constexpr (std::is_same_v<T, CnotStmt>) {
                    out << (st.control == LogicalQubit::A ? "CNOT A B" : "CNOT B A");
                } else if constexpr (std::is_same_v<T, RotationStmt>) {
                    out << 'R' << axis_name(st.axis) << ' '
                        << (st.qubit == LogicalQubit::A ? 'A' : 'B') << ' '
                        << detail::format_number(st.angle_deg);
                } else if constexpr (std::is_same_v<T, SwapStmt>) {
                    out << "SWAP";
                } else if constexpr (std::is_same_v<T, RawPulseStmt>) {
                    out << "P " << axis_name(st.axis) << st.lo << st.hi << ' '
                        << detail::format_number(st.angle_deg);
                } else if constexpr (std::is_same_v<T, WaitStmt>) {
                    out << "WAIT " << detail::format_number(st.seconds);
                } else if constexpr (std::is_same_v<T, PrepStmt>) {
                    out << "PREP " << (st.target >> 1) << (st.target & 1);
                }
            },
            s.stmt);
        out << '\n';
    }
    return out.str();
}

}  // namespace quartit
