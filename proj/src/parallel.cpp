#include "prelat/parallel.hpp"

#include <stdexcept>
#include <thread>
#include <vector>

namespace prelat {

double pairwise_total(std::vector<double> parts) {
  if (parts.empty()) return 0.0;
  // Fixed reduction tree: adjacent pairs per round, odd tail carried over.
  while (parts.size() > 1) {
    std::vector<double> next;
    next.reserve(parts.size() / 2 + 1);
    std::size_t i = 0;
    for (; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (i < parts.size()) next.push_back(parts[i]);
    parts = std::move(next);
  }
  return parts[0];
}

double chunked_sum(std::size_t count, int workers,
                   const std::function<double(std::size_t, std::size_t)>& chunk) {
  if (workers < 1) throw std::invalid_argument("chunked_sum: workers must be >= 1");
  if (count == 0) return 0.0;
  // The chunk layout depends only on (count, workers), so the pairwise
  // reduction below is reproducible for a fixed worker count.
  const std::size_t chunks = static_cast<std::size_t>(workers);
  std::vector<double> parts(chunks, 0.0);
  auto bound = [&](std::size_t i) { return count * i / chunks; };
  if (chunks == 1) {
    parts[0] = chunk(0, count);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      pool.emplace_back([&, c] {
        const std::size_t lo = bound(c), hi = bound(c + 1);
        if (lo < hi) parts[c] = chunk(lo, hi);
      });
    }
    for (auto& t : pool) t.join();
  }
  return pairwise_total(std::move(parts));
}

}  // namespace prelat
