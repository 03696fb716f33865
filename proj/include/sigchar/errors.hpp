#pragma once

#include <stdexcept>
#include <string>

namespace sigchar {

// Width/depth/dimension mismatch between operands.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (log of a
// non-unital element, p < 1, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Time or word index outside the represented range.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

// Non-finite data or a numerical routine that failed to converge.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or manifest.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sigchar
