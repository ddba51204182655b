#pragma once

#include <stdexcept>
#include <string>

// error kinds map onto the CLI exit codes (2 usage, 3 budget, 4 invariant)
namespace schubcalc {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// sigma_uv precondition: v^vee is not below u in the weak order
struct WeakOrderError : UsageError {
  using UsageError::UsageError;
};

inline void check_invariant(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

}  // namespace schubcalc
