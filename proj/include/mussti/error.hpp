#pragma once

#include <stdexcept>
#include <string>

namespace mussti {

enum class ErrorKind {
    UnsupportedGate,
    SyntaxError,
    IndexError,
    SchemaError,
    CapacityError,
    LinkError,
    UnknownZone,
    NotInFrontier,
    CapacityExceeded,
    NoFeasibleZone,
    DeviceFull,
    NoPath,
    OccupancyError,
    LimitsExceeded,
    ConfigError,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::UnsupportedGate: return "UnsupportedGate";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::CapacityError: return "CapacityError";
    case ErrorKind::LinkError: return "LinkError";
    case ErrorKind::UnknownZone: return "UnknownZone";
    case ErrorKind::NotInFrontier: return "NotInFrontier";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::NoFeasibleZone: return "NoFeasibleZone";
    case ErrorKind::DeviceFull: return "DeviceFull";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::OccupancyError: return "OccupancyError";
    case ErrorKind::LimitsExceeded: return "LimitsExceeded";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Single exception type carrying a structured error kind so callers can
/// dispatch on the failure class without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace mussti
