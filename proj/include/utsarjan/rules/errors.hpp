#pragma once

#include <stdexcept>
#include <string>

namespace utsarjan::rules {

/// Relapse scan input whose dates are not strictly increasing.
class UnsortedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No reference-table row covers the requested lookup key.
class ReferenceMiss : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Non-positive anthropometric input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidWindow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or invariant-violating reference data file.
class ReferenceDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace utsarjan::rules
