#pragma once

#include <stdexcept>
#include <string>

namespace tqms {

// Invalid inputs raise std::invalid_argument, out-of-range parameters for a
// formula or a non-primitive chain raise std::domain_error. The two types
// below cover what the standard hierarchy does not name.

/// A requested object exceeds a configured size cap (group order, dimension).
class resource_limit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A dense numerical routine produced non-finite output or failed to converge.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tqms
