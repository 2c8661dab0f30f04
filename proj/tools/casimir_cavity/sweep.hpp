#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace cavity_cli {

/// "start:stop:step" (inclusive, step > 0) or a comma-separated list.
/// Points are start + i * step, so long grids do not accumulate rounding.
std::vector<double> parse_grid(const std::string& spec);

/// Ladder "a:b:c" of integers, or a single integer.
std::vector<int> parse_int_range(const std::string& spec);

/// Evaluates f(i) for i in [0, n) on up to `threads` workers and returns the
/// results in index order. The first exception thrown by f is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace cavity_cli
