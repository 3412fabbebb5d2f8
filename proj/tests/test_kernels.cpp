#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "smoothcover/kernels.hpp"
#include "support.hpp"

using namespace smoothcover;

namespace {

std::vector<Point> candidates(const Lattice& l) {
  const std::size_t n = l.dimension();
  std::vector<Point> out;
  const std::uint64_t total = oracle::power(4, n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Point v(n, 0.0);
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(rest % 4) - 1.0;
      rest /= 4;
      const Point g = l.generator(i);
      for (std::size_t d = 0; d < n; ++d) v[d] += k * g[d];
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("covering grid kernel: serial and parallel agree for any team size") {
  Stream rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng);
    const auto cand = candidates(l);
    const std::size_t side = n == 3 ? 12 : 40;
    const double serial = kernels::covering_grid_max_serial(l, body, side, cand);
    for (int t = 1; t <= 4; ++t) {
      kernels::set_threads(t);
      CHECK(kernels::covering_grid_max_parallel(l, body, side, cand) == serial);
    }
  }
  kernels::set_threads(kernels::max_threads());
}

TEST_CASE("count_at kernel: serial and parallel agree") {
  Stream rng(42);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng).dilate(2.0);
    std::vector<Point> shifts(257, Point(n));
    for (Point& x : shifts) {
      for (double& v : x) v = rng.uniform(-1.0, 1.0);
    }
    const auto serial = kernels::count_at_serial(l, body, shifts, 1u << 20);
    REQUIRE(serial.size() == shifts.size());
    for (std::size_t i = 0; i < shifts.size(); i += 37) CHECK(serial[i] == count_points(l, body, shifts[i]));
    for (int t = 1; t <= 4; ++t) {
      kernels::set_threads(t);
      CHECK(kernels::count_at_parallel(l, body, shifts, 1u << 20) == serial);
      CHECK(kernels::count_at(l, body, shifts, 1u << 20, true) == serial);
    }
  }
  kernels::set_threads(kernels::max_threads());
}

TEST_CASE("shift_counts kernel: matches the oracle and is schedule independent") {
  Stream rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const std::uint64_t p = n == 3 ? 5 : 7;
    const std::uint64_t total = oracle::power(p, n);
    std::vector<std::uint8_t> indicator(total, 0);
    std::set<std::uint64_t> a, s;
    std::vector<FpVector> sv;
    for (std::uint64_t i = 0; i < total; ++i) {
      if (rng.uniform_below(2)) {
        indicator[i] = 1;
        a.insert(i);
      }
      if (rng.uniform_below(4) == 0) {
        s.insert(i);
        sv.push_back(decode(i, p, n));
      }
    }
    const auto serial = kernels::shift_counts_serial(indicator, p, n, sv);
    const auto expect = oracle::shift_counts(a, s, p, n);
    REQUIRE(serial.size() == expect.size());
    for (std::size_t i = 0; i < total; ++i) CHECK(serial[i] == expect[i]);
    for (int t = 1; t <= 4; ++t) {
      kernels::set_threads(t);
      CHECK(kernels::shift_counts_parallel(indicator, p, n, sv) == serial);
    }
    CHECK(kernels::shift_counts(indicator, p, n, sv, false) == serial);
  }
  kernels::set_threads(kernels::max_threads());
}
