#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace levyspde {

// Upper bound on worker threads used by the library (0 = hardware default).
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs body(i) for i in [0, n). Work is handed out in chunks; callers must
// write results to per-index slots so the outcome does not depend on
// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace levyspde
