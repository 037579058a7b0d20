#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ubg {

enum class ErrorKind {
  kInvalidLetter,
  kStageUnderflow,
  kBasisUnderflow,
  kCanonicality,
  kBudgetExceeded,
  kNotBuilt,
  kInfeasible,
  kInvariantViolation,
  kNonConvergence,
  kScaleExhausted,
  kOverflow,
  kSyntax,
  kScalarDomain,
  kOutOfUniverse,
  kConfig,
  kIo,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidLetter: return "invalid-letter";
    case ErrorKind::kStageUnderflow: return "stage-underflow";
    case ErrorKind::kBasisUnderflow: return "basis-underflow";
    case ErrorKind::kCanonicality: return "canonicality-violation";
    case ErrorKind::kBudgetExceeded: return "budget-exceeded";
    case ErrorKind::kNotBuilt: return "not-built";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kInvariantViolation: return "construction-invariant-violation";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kScaleExhausted: return "scale-exhausted";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kSyntax: return "syntax-error";
    case ErrorKind::kScalarDomain: return "scalar-domain";
    case ErrorKind::kOutOfUniverse: return "out-of-universe";
    case ErrorKind::kConfig: return "config-error";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown";
}

/// Every failure in the library is reported through this type; `kind()` lets
/// callers (and the CLI's exit-code mapping) distinguish the cases.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ubg
