#include "forage/parallel.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/partitioner.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace forage {

struct Executor::Arena {
  explicit Arena(unsigned n) : arena(static_cast<int>(n)) {}
  tbb::task_arena arena;
};

Executor::Executor(unsigned threads) : threads_(std::max(1u, threads)) {
  if (threads_ > 1) arena_ = std::make_unique<Arena>(threads_);
}

Executor::~Executor() = default;
Executor::Executor(Executor&&) noexcept = default;
Executor& Executor::operator=(Executor&&) noexcept = default;

void Executor::for_ranges(std::size_t n,
                          const std::function<void(std::size_t, std::size_t)>& body) const {
  if (n == 0) return;
  if (!arena_ || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t grain = std::max<std::size_t>(1, n / (4 * threads_));
  arena_->arena.execute([&] {
    tbb::parallel_for(
        tbb::blocked_range<std::size_t>(0, n, grain),
        [&](const tbb::blocked_range<std::size_t>& r) { body(r.begin(), r.end()); },
        tbb::simple_partitioner());
  });
}

unsigned Executor::default_threads() {
  if (const char* env = std::getenv("FORAGE_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace forage
