#pragma once
#include <stdexcept>
#include <string>

namespace fracdiff {

// Bad experiment configuration or a violated problem assumption that the
// caller could have checked (maps to CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Asking a backend or kernel variant for an operation it does not provide
// (maps to CLI exit code 4).
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An iteration failed to reach its tolerance; carries the last residual
// (maps to CLI exit code 3).
struct convergence_error : std::runtime_error {
    double residual;
    convergence_error(const std::string& msg, double r)
        : std::runtime_error(msg), residual(r) {}
};

} // namespace fracdiff
