#pragma once

#include <stdexcept>
#include <string>

namespace sosarch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario/candidate document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Scenario, weight or parameter invariant violated. The message names the
/// offending entity and rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Bad chromosome text (wrong length or characters other than '0'/'1').
class FormatError : public Error {
 public:
  using Error::Error;
};

/// No feasible completion exists for a partially decided genome.
class InfeasiblePrefix : public Error {
 public:
  using Error::Error;
};

class InfeasibleGenome : public Error {
 public:
  using Error::Error;
};

class RepairFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateScenario : public Error {
 public:
  using Error::Error;
};

class WeightError : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace sosarch
