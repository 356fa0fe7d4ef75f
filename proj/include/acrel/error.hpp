#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace acrel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every violated configuration rule, each prefixed with its key path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Raised when the profile ODE cannot be integrated to tolerance; usually a malformed potential.
class ProfileError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::size_t step, double time);

  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t step_;
  double time_;
};

}  // namespace acrel
