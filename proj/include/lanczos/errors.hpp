#pragma once

#include <stdexcept>
#include <string>

namespace lanczos {

/// Failure of a numerical procedure (solver non-convergence, singular
/// operator, trajectory leaving the metric's validity region).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or invalid run configuration (bad syntax, unknown key,
/// value outside an operation's precondition).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lanczos
