#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vmac {

/// Failure categories raised by the library. The CLI maps these to exit codes.
enum class Errc {
    MalformedLine,
    EmptyTrace,
    MissingFps,
    BoundsTooTight,
    MixedFps,
    WindowOutOfRange,
    DegenerateRanges,
    InsufficientHistory,
    EmptyLibrary,
    ClassMissing,
    ZeroMean,
    TooShort,
    InvalidArgument,
    Io,
};

constexpr std::string_view to_string(Errc e) noexcept {
    switch (e) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::EmptyTrace: return "EmptyTrace";
    case Errc::MissingFps: return "MissingFps";
    case Errc::BoundsTooTight: return "BoundsTooTight";
    case Errc::MixedFps: return "MixedFps";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::DegenerateRanges: return "DegenerateRanges";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::EmptyLibrary: return "EmptyLibrary";
    case Errc::ClassMissing: return "ClassMissing";
    case Errc::ZeroMean: return "ZeroMean";
    case Errc::TooShort: return "TooShort";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Thrown by the trace parser; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(Errc code, std::size_t line, const std::string& what)
        : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace vmac
