#pragma once

#include <stdexcept>
#include <string>

namespace iwasawa {

/// Three-valued verdict. Every equality or membership test in this library is
/// decided at truncation, so "could not tell" is kept apart from "false".
enum class Truth { False, True, Indeterminate };

inline Truth truth_of(bool b) { return b ? Truth::True : Truth::False; }

inline Truth operator&&(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::Indeterminate || b == Truth::Indeterminate) return Truth::Indeterminate;
    return Truth::True;
}

inline const char* to_string(Truth t) {
    switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct ContextMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The answer depends on information lost to the precision or degree cap.
struct IndeterminateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// p-adic digits ran out in the middle of an elimination.
struct PrecisionExhausted : IndeterminateError {
    using IndeterminateError::IndeterminateError;
};

/// Input shape outside what the operation handles exactly.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line(line), column(column) {}
    int line;
    int column;
};

} // namespace iwasawa
