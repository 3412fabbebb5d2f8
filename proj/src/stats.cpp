#include "smoothcover/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "smoothcover/error.hpp"

namespace smoothcover {

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
  if (n == 0) throw EmptyInput("clopper_pearson: no trials");
  if (k > n) throw ConfigError("clopper_pearson: more successes than trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("clopper_pearson: confidence must lie in (0, 1)");
  const double alpha = 1.0 - confidence;
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, alpha / 2.0);
  const double hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - alpha / 2.0);
  return {lo, hi};
}

double quantile(std::span<const double> data, double q) {
  if (data.empty()) throw EmptyInput("quantile: no data");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile: q must lie in [0, 1]");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace smoothcover
