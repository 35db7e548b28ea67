#pragma once

#include <stdexcept>
#include <string>

namespace gct {

// Shape or size disagreement between arguments (patch larger than image,
// feature count vs. layout, vector dimensions).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Geometric degeneracy, e.g. all valid joints coincide.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// NaN input or a covariance that stays singular after regularization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stored layout does not match the images being evaluated.
class LayoutMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gct
