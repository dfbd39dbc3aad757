#pragma once

#include <exception>
#include <string>
#include <string_view>

namespace vemt {

/// Element loops run either in a plain serial loop (the reference) or
/// under OpenMP. Local matrices are computed independently per cell and
/// scattered serially in cell order, so both policies give bit-identical
/// global operators.
enum class ExecPolicy { serial, parallel };

ExecPolicy parse_exec_policy(std::string_view name);
std::string to_string(ExecPolicy policy);

/// Calls fn(i) for i in [0, n). The first exception thrown by any call is
/// rethrown on the calling thread after the loop.
template <class F>
void for_each_index(int n, ExecPolicy policy, F&& fn) {
  if (policy == ExecPolicy::serial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(vemt_for_each_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace vemt
