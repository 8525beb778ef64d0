#pragma once

#include <stdexcept>
#include <string>

namespace lotr {

// Bad card data, scenario files or experiment settings. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken engine invariant; always a bug. Maps to CLI exit code 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Contract breach at step(): action at a ruled stage, missing or illegal decision.
class IllegalAction : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace lotr
