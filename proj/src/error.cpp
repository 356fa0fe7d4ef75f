#include "acrel/error.hpp"

namespace acrel {

namespace {
std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& s : items) out += "\n  " + s;
  return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

SolverError::SolverError(const std::string& what, std::size_t step, double time)
    : Error(what + " (step " + std::to_string(step) + ", t = " + std::to_string(time) + ")"), step_(step), time_(time) {}

}  // namespace acrel
