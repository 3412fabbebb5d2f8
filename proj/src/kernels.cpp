#include "smoothcover/kernels.hpp"

#include <algorithm>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace smoothcover::kernels {

namespace {

Point grid_point(const Lattice& lattice, std::uint64_t index, std::size_t per_axis) {
  const std::size_t n = lattice.dimension();
  const Eigen::MatrixXd& g = lattice.basis();
  Point x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(index % per_axis) / static_cast<double>(per_axis);
    index /= per_axis;
    for (std::size_t d = 0; d < n; ++d) x[d] += t * g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i));
  }
  return x;
}

double min_gauge(const ConvexBody& body, std::span<const double> x, std::span<const Point> candidates, Point& diff) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& l : candidates) {
    for (std::size_t d = 0; d < x.size(); ++d) diff[d] = x[d] - l[d];
    best = std::min(best, body.centered_gauge(diff));
  }
  return best;
}

std::uint64_t grid_size(std::size_t per_axis, std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= per_axis;
  return total;
}

// |(x + S) ∩ A| for a single shift given as digits.
std::uint32_t shift_count_one(std::span<const std::uint8_t> indicator, std::uint64_t p, std::size_t n,
                              std::span<const FpVector> s, const FpVector& x) {
  std::uint32_t hits = 0;
  for (const FpVector& v : s) {
    std::uint64_t idx = 0;
    for (std::size_t d = n; d-- > 0;) {
      std::uint64_t c = static_cast<std::uint64_t>(x[d]) + v[d];
      if (c >= p) c -= p;
      idx = idx * p + c;
    }
    hits += indicator[idx];
  }
  return hits;
}

}  // namespace

double covering_grid_max_serial(const Lattice& lattice, const ConvexBody& body, std::size_t points_per_axis,
                                std::span<const Point> candidates) {
  const std::size_t n = lattice.dimension();
  const std::uint64_t total = grid_size(points_per_axis, n);
  Point diff(n);
  double worst = 0.0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const Point x = grid_point(lattice, idx, points_per_axis);
    worst = std::max(worst, min_gauge(body, x, candidates, diff));
  }
  return worst;
}

double covering_grid_max_parallel(const Lattice& lattice, const ConvexBody& body, std::size_t points_per_axis,
                                  std::span<const Point> candidates) {
  const std::size_t n = lattice.dimension();
  const auto total = static_cast<std::int64_t>(grid_size(points_per_axis, n));
  double worst = 0.0;
  std::exception_ptr error;
#pragma omp parallel
  {
    Point diff(n);
    double local = 0.0;
#pragma omp for schedule(static) nowait
    for (std::int64_t idx = 0; idx < total; ++idx) {
      try {
        const Point x = grid_point(lattice, static_cast<std::uint64_t>(idx), points_per_axis);
        local = std::max(local, min_gauge(body, x, candidates, diff));
      } catch (...) {
#pragma omp critical(smoothcover_error)
        if (!error) error = std::current_exception();
      }
    }
#pragma omp critical(smoothcover_reduce)
    worst = std::max(worst, local);
  }
  if (error) std::rethrow_exception(error);
  return worst;
}

std::vector<std::uint64_t> count_at_serial(const Lattice& lattice, const ConvexBody& body,
                                           std::span<const Point> shifts, std::uint64_t budget) {
  std::vector<std::uint64_t> out(shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) out[i] = count_points(lattice, body, shifts[i], budget);
  return out;
}

std::vector<std::uint64_t> count_at_parallel(const Lattice& lattice, const ConvexBody& body,
                                             std::span<const Point> shifts, std::uint64_t budget) {
  std::vector<std::uint64_t> out(shifts.size());
  const auto total = static_cast<std::int64_t>(shifts.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < total; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = count_points(lattice, body, shifts[static_cast<std::size_t>(i)], budget);
    } catch (...) {
#pragma omp critical(smoothcover_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<std::uint64_t> count_at(const Lattice& lattice, const ConvexBody& body, std::span<const Point> shifts,
                                    std::uint64_t budget, bool parallel) {
  return parallel ? count_at_parallel(lattice, body, shifts, budget) : count_at_serial(lattice, body, shifts, budget);
}

std::vector<std::uint32_t> shift_counts_serial(std::span<const std::uint8_t> indicator, std::uint64_t p,
                                               std::size_t n, std::span<const FpVector> s) {
  std::vector<std::uint32_t> out(indicator.size());
  for (std::uint64_t x = 0; x < indicator.size(); ++x) out[x] = shift_count_one(indicator, p, n, s, decode(x, p, n));
  return out;
}

std::vector<std::uint32_t> shift_counts_parallel(std::span<const std::uint8_t> indicator, std::uint64_t p,
                                                 std::size_t n, std::span<const FpVector> s) {
  std::vector<std::uint32_t> out(indicator.size());
  const auto total = static_cast<std::int64_t>(indicator.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < total; ++x) {
    out[static_cast<std::size_t>(x)] =
        shift_count_one(indicator, p, n, s, decode(static_cast<std::uint64_t>(x), p, n));
  }
  return out;
}

std::vector<std::uint32_t> shift_counts(std::span<const std::uint8_t> indicator, std::uint64_t p, std::size_t n,
                                        std::span<const FpVector> s, bool parallel) {
  return parallel ? shift_counts_parallel(indicator, p, n, s) : shift_counts_serial(indicator, p, n, s);
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace smoothcover::kernels
