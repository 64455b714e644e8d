#pragma once

#include <stdexcept>
#include <string>

namespace sphkern {

/// A precondition on an argument's value failed (m < 2, t outside (0, pi), ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A requested index or length exceeds what a computed object holds.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Two objects that must agree in shape (m, kmax) do not.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or produced an inadmissible value.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Funk–Hecke eigenvalue below the clamping threshold.
class NotPositiveDefinite : public NumericalError {
public:
  using NumericalError::NumericalError;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace detail
}  // namespace sphkern
