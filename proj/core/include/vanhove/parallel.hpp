#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vanhove {

/// Worker count: VANHOVE_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n). Items are handed out dynamically, but every
/// result must be written to slot i by the caller, so output order never
/// depends on scheduling. Exceptions from workers are rethrown (the one with
/// the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned threads = 0) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); }, threads);
  return out;
}

}  // namespace vanhove
