#pragma once

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cartan {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed expression or spec file; carries a byte offset / line context in the message.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

/// Evaluation left the domain of a function (division by zero, log of non-positive value, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A matrix that must be invertible is numerically singular.
struct SingularError : Error {
  using Error::Error;
};

/// An input violated a structural precondition (shape, signature, group membership).
struct ShapeError : Error {
  using Error::Error;
};

/// Thread cap: CARTAN_DRESS_THREADS if set, else hardware concurrency, clamped to [1, 16].
inline int thread_cap() {
  if (const char* env = std::getenv("CARTAN_DRESS_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v > 16 ? 16 : v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  if (hc == 0) hc = 1;
  return hc > 8 ? 8 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, count). Results must be written to pre-sized slots indexed
/// by i so the merge order (and any report built from it) is independent of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = thread_cap();
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  if (workers > count) workers = count;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace cartan
