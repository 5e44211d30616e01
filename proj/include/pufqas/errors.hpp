// errors.hpp
// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace pufqas {

// A dimension argument is below the minimum an operation supports.
class invalid_dimension : public std::invalid_argument {
 public:
  explicit invalid_dimension(const std::string& what) : std::invalid_argument(what) {}
};

// Two objects that must share a dimension do not.
class dimension_mismatch : public std::invalid_argument {
 public:
  explicit dimension_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

// The requested object exceeds a configured size cap or the 64-bit range.
class capacity_error : public std::length_error {
 public:
  explicit capacity_error(const std::string& what) : std::length_error(what) {}
};

// A numeric invariant (norm, trace, Hermiticity, positivity) failed beyond
// tolerance. Usually signals a broken operator produced upstream.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Marginals of a permutation-invariant state disagreed beyond tolerance.
class symmetry_violation : public std::runtime_error {
 public:
  explicit symmetry_violation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pufqas
