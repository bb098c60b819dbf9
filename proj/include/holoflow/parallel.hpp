#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace holoflow {

// Every parallel kernel keeps a serial path; both must give bit-identical
// results because each index writes only its own output slot.
enum class ExecPolicy { serial, openmp };

ExecPolicy default_policy();
void set_default_policy(ExecPolicy p);

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, ExecPolicy policy = default_policy()) {
  if (policy == ExecPolicy::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace holoflow
