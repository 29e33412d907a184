#include "fpade/error.hpp"

#include <utility>

namespace fpade {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::structural: return "structural";
    case ErrorKind::pole: return "pole";
    case ErrorKind::boundary: return "boundary";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::formula_regression: return "formula_regression";
    case ErrorKind::numerical: return "numerical";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::vector<std::string> details,
             std::vector<double> trace)
    : std::runtime_error(message), kind_(kind), details_(std::move(details)),
      trace_(std::move(trace))
{
}

void fail(ErrorKind kind, const std::string& message, std::vector<std::string> details,
          std::vector<double> trace)
{
    throw Error(kind, message, std::move(details), std::move(trace));
}

} // namespace fpade
