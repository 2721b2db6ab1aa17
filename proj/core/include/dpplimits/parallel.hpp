#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace dpplimits {

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
/// hardware concurrency). Bodies must write only to per-index slots; any
/// exception is rethrown on the caller, lowest index first.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation; result is independent of thread count.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace dpplimits
