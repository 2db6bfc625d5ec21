#ifndef DSIM_SRC_PARALLEL_H_
#define DSIM_SRC_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dsim::internal {

// Splits [0, count) into contiguous chunks, one per worker. `body(begin, end)`
// must only write state owned by its own indices. Runs inline when the work
// is small or a single worker is requested.
template <typename Body>
void ParallelFor(std::size_t count, unsigned threads, std::size_t min_chunk,
                 Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(
      threads, std::max<std::size_t>(1, count / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace dsim::internal

#endif  // DSIM_SRC_PARALLEL_H_
