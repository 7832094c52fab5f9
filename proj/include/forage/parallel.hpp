#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace forage {

/// Runs slot-range work on a fixed number of workers. Work items must write
/// disjoint outputs; results are then independent of the worker count.
class Executor {
 public:
  explicit Executor(unsigned threads = 1);
  ~Executor();
  Executor(Executor&&) noexcept;
  Executor& operator=(Executor&&) noexcept;

  unsigned threads() const { return threads_; }

  /// Calls body(begin, end) over disjoint ranges covering [0, n).
  void for_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) const;

  /// Default worker count: FORAGE_THREADS if set, else 1.
  static unsigned default_threads();

 private:
  struct Arena;
  unsigned threads_;
  std::unique_ptr<Arena> arena_;
};

}  // namespace forage
