// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace cswarm {

/// Worker count used by parallel_for. 0 selects hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Run fn(begin, end) over disjoint contiguous chunks of [0, n).
/// Workers write results into caller-owned slots indexed by loop index, so
/// output is identical for any thread count; reductions are left to the
/// caller and must run in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace cswarm
