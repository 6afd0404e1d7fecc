#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zeittafel {

// Raised for malformed input: bad estimates, unknown ids, inconsistent requests.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by network construction when the precedence edges contain a cycle.
class CycleError : public ValidationError {
 public:
  CycleError(const std::string& what, std::vector<std::string> cycle)
      : ValidationError(what), cycle_(std::move(cycle)) {}

  // One witness cycle, in traversal order. The first id is not repeated at the end.
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

}  // namespace zeittafel
