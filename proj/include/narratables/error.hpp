#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace narratables {

/// Every failure the library raises carries one of these kinds. The CLI maps
/// each kind onto a fixed process exit code (see cli.hpp).
enum class ErrorKind {
    InvalidArgument,
    // geometry
    SuperluminalVelocity,
    CoincidentWorldlines,
    OverlappingSimultaneousPairs,
    // quantum
    InvalidPairing,
    SlotOutOfRange,
    EqualSlots,
    OverlappingPairs,
    NonUnitary,
    DimensionCapExceeded,
    DimensionMismatch,
    // narrative
    FoliationMismatch,
    // clusterkit
    NotConserving,
    // cli / io
    ParseError,
    UnknownRule,
    IndexOutOfRange,
    FileError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::SuperluminalVelocity: return "SuperluminalVelocity";
        case ErrorKind::CoincidentWorldlines: return "CoincidentWorldlines";
        case ErrorKind::OverlappingSimultaneousPairs: return "OverlappingSimultaneousPairs";
        case ErrorKind::InvalidPairing: return "InvalidPairing";
        case ErrorKind::SlotOutOfRange: return "SlotOutOfRange";
        case ErrorKind::EqualSlots: return "EqualSlots";
        case ErrorKind::OverlappingPairs: return "OverlappingPairs";
        case ErrorKind::NonUnitary: return "NonUnitary";
        case ErrorKind::DimensionCapExceeded: return "DimensionCapExceeded";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::FoliationMismatch: return "FoliationMismatch";
        case ErrorKind::NotConserving: return "NotConserving";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownRule: return "UnknownRule";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::FileError: return "FileError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace narratables
