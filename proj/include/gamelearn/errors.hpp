#pragma once

#include <stdexcept>
#include <string>

namespace gamelearn {

// Malformed or out-of-domain data: bad files, invalid distributions,
// parameter values outside their documented ranges.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Misuse of the command-line surface: unknown names, unparseable tokens.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gamelearn
