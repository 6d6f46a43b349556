#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace vknot {

enum class ErrorKind {
    SyntaxError,
    UnbalancedLabel,
    MalformedPass,
    MismatchedSigns,
    UnpairedCrossing,
    MultiComponent,
    ClosedInput,
    LongDiagram,
    IndexOutOfRange,
    TooManyCrossings,
    TooLarge,
    OddLength,
    NonterminatingReduction,
    ParityViolation,
    NoSuchEdge,
    PatternMismatch,
    CapExceeded,
    UnknownEntry,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnbalancedLabel: return "UnbalancedLabel";
        case ErrorKind::MalformedPass: return "MalformedPass";
        case ErrorKind::MismatchedSigns: return "MismatchedSigns";
        case ErrorKind::UnpairedCrossing: return "UnpairedCrossing";
        case ErrorKind::MultiComponent: return "MultiComponent";
        case ErrorKind::ClosedInput: return "ClosedInput";
        case ErrorKind::LongDiagram: return "LongDiagram";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::TooManyCrossings: return "TooManyCrossings";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::OddLength: return "OddLength";
        case ErrorKind::NonterminatingReduction: return "NonterminatingReduction";
        case ErrorKind::ParityViolation: return "ParityViolation";
        case ErrorKind::NoSuchEdge: return "NoSuchEdge";
        case ErrorKind::PatternMismatch: return "PatternMismatch";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::UnknownEntry: return "UnknownEntry";
    }
    return "Error";
}

/// All library failures are reported through this exception. `position`
/// is a byte offset into the offending input text when one applies.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message +
                             (position ? " (at offset " + std::to_string(*position) + ")" : "")),
          kind_(kind),
          position_(position) {}

    ErrorKind kind() const { return kind_; }
    std::optional<std::size_t> position() const { return position_; }

    /// Caps and size limits map to a distinct process exit code in the CLI.
    bool is_cap() const {
        return kind_ == ErrorKind::TooManyCrossings || kind_ == ErrorKind::TooLarge ||
               kind_ == ErrorKind::CapExceeded;
    }

private:
    ErrorKind kind_;
    std::optional<std::size_t> position_;
};

} // namespace vknot
