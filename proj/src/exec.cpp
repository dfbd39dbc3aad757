#include "vemt/exec.hpp"

#include <stdexcept>

namespace vemt {

ExecPolicy parse_exec_policy(std::string_view name) {
  if (name == "serial") return ExecPolicy::serial;
  if (name == "parallel") return ExecPolicy::parallel;
  throw std::invalid_argument("unknown execution policy '" + std::string(name) + "'");
}

std::string to_string(ExecPolicy policy) { return policy == ExecPolicy::serial ? "serial" : "parallel"; }

}  // namespace vemt
