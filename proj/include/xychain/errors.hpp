#pragma once

#include <stdexcept>
#include <string>

namespace xychain {

// Input that violates a chain-spec invariant or a solver's routing rule.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// (H_{i,j} - lambda I) is numerically singular at the requested shift.
class SingularResolventError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A reduced characteristic root could not be polished to tolerance.
class RootRefinementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The brute-force oracle failed to converge.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem too large for the dense many-body representation.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace xychain
