#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fpade {

/// Failure categories. The CLI maps `validation` and `domain` to exit code 2
/// and everything else to exit code 3.
enum class ErrorKind {
    validation,
    domain,
    degeneracy,
    structural,
    pole,
    boundary,
    non_convergence,
    formula_regression,
    numerical,
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::vector<std::string> details = {}, std::vector<double> trace = {});

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<std::string>& details() const noexcept { return details_; }
    /// Numeric history attached by iterative solvers (e.g. displacement per iteration).
    [[nodiscard]] const std::vector<double>& trace() const noexcept { return trace_; }

private:
    ErrorKind kind_;
    std::vector<std::string> details_;
    std::vector<double> trace_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message,
                       std::vector<std::string> details = {}, std::vector<double> trace = {});

} // namespace fpade
