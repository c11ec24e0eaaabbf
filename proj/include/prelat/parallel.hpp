#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace prelat {

// Deterministic reduction: the index range is split into `workers` contiguous
// chunks, each chunk is accumulated serially in index order, and the partial
// sums are combined by a fixed pairwise tree. For a fixed worker count the
// result is bit-for-bit reproducible; across worker counts it may differ by
// rounding only.
double chunked_sum(std::size_t count, int workers,
                   const std::function<double(std::size_t begin, std::size_t end)>& chunk);

// Pairwise tree over a fixed-order list of partial sums.
double pairwise_total(std::vector<double> parts);

}  // namespace prelat
