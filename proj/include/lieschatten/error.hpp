#pragma once

#include <stdexcept>
#include <string>

namespace lieschatten {

/// Raised when a numerical guard trips: a quadrature rule that cannot
/// resolve the requested duals, or an oracle matrix above the size cap.
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lieschatten
