#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace vfmesh {

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// hardware_concurrency threads. Chunks are disjoint, so bodies writing to
/// distinct output slots need no synchronization.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 1024) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / min_chunk));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace vfmesh
