#pragma once

#include <stdexcept>
#include <string>

namespace halfline {

enum class ErrorKind {
    invalid_argument,
    spec_invalid,
    spec_rejected,
    domain_violation,
    non_convergence,
    numerical_breakdown,
    inconsistent_report,
    hypothesis_not_met,
    probe_inconclusive,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error the library throws. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::spec_invalid: return "spec-invalid";
    case ErrorKind::spec_rejected: return "spec-rejected";
    case ErrorKind::domain_violation: return "domain-violation";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::numerical_breakdown: return "numerical-breakdown";
    case ErrorKind::inconsistent_report: return "inconsistent-report";
    case ErrorKind::hypothesis_not_met: return "hypothesis-not-met";
    case ErrorKind::probe_inconclusive: return "probe-inconclusive";
    }
    return "unknown";
}

} // namespace halfline
