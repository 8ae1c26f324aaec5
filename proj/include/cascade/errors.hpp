// errors.hpp: exception types shared by the numerical modules.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cascade {

enum class ErrorKind {
    NoConvergence,
    NonIntegrable,
    PoleOnSupportBoundary,
    OscillationResolution,
    StepTooCoarse,
    GridMismatch,
    GridTooCoarse,
    NoPeak,
    RangeTooNarrow,
    RecurrenceGuard,
    NormDrift,
    NotConverged,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NonIntegrable: return "NonIntegrable";
        case ErrorKind::PoleOnSupportBoundary: return "PoleOnSupportBoundary";
        case ErrorKind::OscillationResolution: return "OscillationResolution";
        case ErrorKind::StepTooCoarse: return "StepTooCoarse";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::NoPeak: return "NoPeak";
        case ErrorKind::RangeTooNarrow: return "RangeTooNarrow";
        case ErrorKind::RecurrenceGuard: return "RecurrenceGuard";
        case ErrorKind::NormDrift: return "NormDrift";
        case ErrorKind::NotConverged: return "NotConverged";
    }
    return "Unknown";
}

// A numerical failure. The kind is what the CLI reports (exit status 2).
class NumericalError : public std::runtime_error {
public:
    NumericalError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return to_string(kind_); }

private:
    ErrorKind kind_;
};

// Malformed or inconsistent scenario configuration (exit status 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cascade
