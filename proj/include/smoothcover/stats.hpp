#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smoothcover {

struct Interval {
  double lower;
  double upper;
};

/// Exact two-sided Clopper-Pearson interval for k successes in n trials.
Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence);

/// Linear-interpolation quantile (type 7) of unsorted data, q in [0, 1].
double quantile(std::span<const double> data, double q);

}  // namespace smoothcover
