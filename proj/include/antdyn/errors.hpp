#pragma once

#include <stdexcept>
#include <string>

namespace antdyn {

/// Bad or inconsistent input data (recording bundles, genome files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values or flags.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition. Indicates a programming error.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace antdyn
