#pragma once

#include <stdexcept>
#include <string>

namespace sdeffect {

enum class ErrorKind {
    UnbalancedSystem,
    InvalidMultiplicity,
    NotFound,
    EmptyClass,
    EmptyDeck,
    BadRange,
    InfeasiblePrefix,
    OutOfRange,
    ConvergenceFailure,
    ShoeExhausted,
    InvalidModel,
    BadPenetration,
    ParseError,
    ConfigError,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::UnbalancedSystem: return "UnbalancedSystem";
    case ErrorKind::InvalidMultiplicity: return "InvalidMultiplicity";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::EmptyDeck: return "EmptyDeck";
    case ErrorKind::BadRange: return "BadRange";
    case ErrorKind::InfeasiblePrefix: return "InfeasiblePrefix";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::ShoeExhausted: return "ShoeExhausted";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::BadPenetration: return "BadPenetration";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace sdeffect
