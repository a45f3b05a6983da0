#pragma once

#include <stdexcept>
#include <string>

namespace swarm {

// Thrown when an operation would leave the model in a state that violates
// one of its structural rules (non-positive forces, utilities outside
// [0,1], cyclic importance relations, and the like).
class model_violation : public std::runtime_error {
 public:
  explicit model_violation(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the runner layer for malformed or inconsistent run
// configuration.  Maps to exit code 2 in the CLI.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace swarm
