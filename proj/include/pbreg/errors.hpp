#pragma once

#include <stdexcept>
#include <string>

namespace pbreg {

// Argument outside the mathematical domain of a function (boundary
// probabilities, non-positive shapes, non-finite input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid call: dimension mismatch, rank deficiency, bad grid.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sample too small for the requested estimator.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Data that cannot support a fit (e.g. constant response).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite intermediate during evaluation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or unknown column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too many failed bootstrap replicates.
class BootstrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pbreg
