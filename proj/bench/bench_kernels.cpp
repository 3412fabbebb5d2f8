// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cmath>

#include "smoothcover/kernels.hpp"
#include "smoothcover/lattice.hpp"
#include "smoothcover/random.hpp"

using namespace smoothcover;

namespace {

Lattice skewed(std::size_t n) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(Eigen::Index(n), Eigen::Index(n));
  for (Eigen::Index i = 0; i + 1 < Eigen::Index(n); ++i) g(i, i + 1) = 0.3;
  return Lattice(g);
}

std::vector<Point> candidates(const Lattice& l) {
  const std::size_t n = l.dimension();
  std::vector<Point> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 4;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Point v(n, 0.0);
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = double(rest % 4) - 1.0;
      rest /= 4;
      const Point g = l.generator(i);
      for (std::size_t d = 0; d < n; ++d) v[d] += k * g[d];
    }
    out.push_back(std::move(v));
  }
  return out;
}

void covering_grid(benchmark::State& state, bool parallel) {
  const std::size_t n = 3;
  const Lattice l = skewed(n);
  const ConvexBody ball = ConvexBody::ball(Point(n, 0.0), 1.0);
  const auto cand = candidates(l);
  const auto side = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const double v = parallel ? kernels::covering_grid_max_parallel(l, ball, side, cand)
                              : kernels::covering_grid_max_serial(l, ball, side, cand);
    benchmark::DoNotOptimize(v);
  }
}

void count_at(benchmark::State& state, bool parallel) {
  const std::size_t n = 3;
  const Lattice l = skewed(n);
  const ConvexBody ball = ConvexBody::ball(Point(n, 0.0), 3.0);
  Stream rng(1);
  std::vector<Point> shifts(static_cast<std::size_t>(state.range(0)), Point(n));
  for (Point& x : shifts) {
    for (double& v : x) v = rng.uniform01();
  }
  for (auto _ : state) {
    auto v = parallel ? kernels::count_at_parallel(l, ball, shifts, std::uint64_t{1} << 30)
                      : kernels::count_at_serial(l, ball, shifts, std::uint64_t{1} << 30);
    benchmark::DoNotOptimize(v.data());
  }
}

void shift_counts(benchmark::State& state, bool parallel) {
  const std::uint64_t p = 31;
  const std::size_t n = 3;
  const std::uint64_t total = p * p * p;
  Stream rng(2);
  std::vector<std::uint8_t> indicator(total);
  for (auto& e : indicator) e = rng.uniform_below(5) == 0;
  std::vector<FpVector> s(static_cast<std::size_t>(state.range(0)));
  for (auto& v : s) v = decode(rng.uniform_below(total), p, n);
  for (auto _ : state) {
    auto v = parallel ? kernels::shift_counts_parallel(indicator, p, n, s)
                      : kernels::shift_counts_serial(indicator, p, n, s);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(covering_grid, serial, false)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(covering_grid, parallel, true)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(count_at, serial, false)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(count_at, parallel, true)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(shift_counts, serial, false)->Arg(31)->Arg(961)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(shift_counts, parallel, true)->Arg(31)->Arg(961)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
