#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "smoothcover/error.hpp"
#include "smoothcover/lattice.hpp"
#include "support.hpp"

using namespace smoothcover;

namespace {

Lattice hexagonal() {
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  return Lattice(g);
}

// Smallest difference gauge over nonzero k in [-reach, reach]^n.
double packing_oracle(const Lattice& l, const ConvexBody& body, int reach) {
  const std::size_t n = l.dimension();
  const std::uint64_t side = static_cast<std::uint64_t>(2 * reach + 1);
  double best = INFINITY;
  for (std::uint64_t idx = 0; idx < oracle::power(side, n); ++idx) {
    std::uint64_t rest = idx;
    Eigen::VectorXd k(static_cast<Eigen::Index>(n));
    bool zero = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::int64_t>(rest % side) - reach;
      rest /= side;
      k(static_cast<Eigen::Index>(i)) = static_cast<double>(c);
      zero = zero && c == 0;
    }
    if (zero) continue;
    const Eigen::VectorXd v = l.basis() * k;
    best = std::min(best, body.difference_gauge(Point(v.data(), v.data() + v.size())));
  }
  return best;
}

// Generous bound on |k_i| over lattice points g k in body + x, from the bounding box corners.
int coefficient_reach(const Lattice& l, const ConvexBody& body, const Point& x) {
  const AxisBox bb = body.bounding_box();
  const std::size_t n = l.dimension();
  double worst = 0.0;
  for (std::uint64_t corner = 0; corner < (1u << n); ++corner) {
    Point y(n);
    for (std::size_t d = 0; d < n; ++d) y[d] = ((corner >> d) & 1 ? bb.upper[d] : bb.lower[d]) + x[d];
    for (double c : l.coefficients(y)) worst = std::max(worst, std::abs(c));
  }
  return static_cast<int>(std::ceil(worst)) + 1;
}

}  // namespace

TEST_CASE("basis validation") {
  Eigen::MatrixXd sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(Lattice{sing}, ConfigError);
  CHECK_THROWS_AS(Lattice{Eigen::MatrixXd(2, 3)}, ConfigError);
  Eigen::MatrixXd nan = Eigen::MatrixXd::Identity(2, 2);
  nan(0, 1) = NAN;
  CHECK_THROWS_AS(Lattice{nan}, ConfigError);
  CHECK(hexagonal().covolume() == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(Lattice::integer(3).is_diagonal());
  CHECK_FALSE(hexagonal().is_diagonal());
  CHECK(Lattice::integer(2).scaled(3.0).covolume() == doctest::Approx(9.0));
}

TEST_CASE("count_points matches exhaustive enumeration") {
  Stream rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng, 0.5).dilate(rng.uniform(0.5, 2.0));
    Point x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    CHECK(count_points(l, body, x) == oracle::count_points(l.basis(), body, x, coefficient_reach(l, body, x)));
  }
}

TEST_CASE("count_points on boundary points of Z^n") {
  const Lattice z2 = Lattice::integer(2);
  CHECK(count_points(z2, ConvexBody::box({0.0, 0.0}, {1.0, 1.0}), Point{0.0, 0.0}) == 4);
  CHECK(count_points(z2, ConvexBody::half_open_box({0.0, 0.0}, {1.0, 1.0}), Point{0.0, 0.0}) == 1);
  CHECK(count_points(z2, ConvexBody::half_open_box({0.0, 0.0}, {3.0, 2.0}), Point{0.5, 0.5}) == 6);
  CHECK(count_points(z2, ConvexBody::ball({0.0, 0.0}, 1.0), Point{0.0, 0.0}) == 5);
  CHECK(count_points(Lattice::integer(3), ConvexBody::ball({0.0, 0.0, 0.0}, std::sqrt(2.0)), Point{0.0, 0.0, 0.0}) ==
        19);
}

TEST_CASE("enumeration budget") {
  const ConvexBody big = ConvexBody::ball({0.0, 0.0, 0.0}, 30.0);
  CHECK_THROWS_AS(count_points(Lattice::integer(3), big, Point{0.0, 0.0, 0.0}, 1000), EnumerationBudgetExceeded);
}

TEST_CASE("fundamental net and net points") {
  const Lattice h = hexagonal();
  const auto net = fundamental_net(h, 3, 100);
  REQUIRE(net.size() == 9);
  const FpVector r{2, 1};
  const Point x = net[encode(r, 3)];
  CHECK(x[0] == doctest::Approx(2.0 / 3.0 + 0.5 / 3.0));
  CHECK(x[1] == doctest::Approx(std::sqrt(3.0) / 6.0));
  const Point y = net_point(h, 3, r);
  CHECK(y[0] == doctest::Approx(x[0]));
  CHECK(y[1] == doctest::Approx(x[1]));
  CHECK_THROWS_AS(fundamental_net(h, 11, 100), CapExceeded);
}

TEST_CASE("Hecke lifts have the right covolume and residues") {
  Stream rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(4);
    const std::uint64_t primes[] = {2, 3, 5, 7, 13};
    const std::uint64_t p = primes[rng.uniform_below(5)];
    const std::size_t r = rng.uniform_below(n + 1);
    const Lattice base = testing::random_lattice(n, rng);
    const FpSubspace s = sample_uniform_subspace(p, n, r, rng);
    const Lattice lift = hecke_lift(base, s);
    CHECK(lift.covolume() == doctest::Approx(base.covolume() * std::pow(double(p), -double(r))).epsilon(1e-9));
    // Each generator of the lift has base coefficients in (1/p) Z^n reducing into S.
    for (std::size_t i = 0; i < n; ++i) {
      const Point c = base.coefficients(lift.generator(i));
      FpVector res(n);
      for (std::size_t d = 0; d < n; ++d) {
        const double pc = c[d] * double(p);
        CHECK(std::abs(pc - std::round(pc)) < 1e-8);
        const auto k = static_cast<std::int64_t>(std::llround(pc));
        res[d] = static_cast<Residue>(((k % std::int64_t(p)) + std::int64_t(p)) % std::int64_t(p));
      }
      CHECK(s.contains(res));
    }
    // Conversely every lift of a member of S lies in the lift.
    for (const FpVector& v : s.enumerate(1 << 16)) {
      Point y(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const Point gi = base.generator(i);
        for (std::size_t d = 0; d < n; ++d) y[d] += gi[d] * v[i] / double(p);
      }
      for (double c : lift.coefficients(y)) CHECK(std::abs(c - std::round(c)) < 1e-8);
    }
  }
}

TEST_CASE("construction A has covolume one") {
  Stream rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(5);
    const std::size_t r = 1 + rng.uniform_below(n);
    const ConstructionA c = construction_a(31, r, n, rng);
    CHECK(c.lattice.covolume() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.subspace.rank() == r);
  }
  CHECK_THROWS_AS(construction_a(31, 0, 2, rng), ConfigError);
}

TEST_CASE("packing radius") {
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(packing_radius(Lattice::integer(n), ConvexBody::ball(Point(n, 0.0), 1.0)) == doctest::Approx(0.5));
  }
  CHECK(packing_radius(hexagonal(), ConvexBody::ball({0.0, 0.0}, 1.0)) == doctest::Approx(0.5));
  CHECK(packing_radius(Lattice::integer(2), ConvexBody::box({0.0, 0.0}, {0.5, 0.25})) == doctest::Approx(2.0));
  Stream rng(34);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng, 2.0);
    CHECK(packing_radius(l, body) == doctest::Approx(packing_oracle(l, body, n == 3 ? 5 : 10)).epsilon(1e-12));
  }
}

TEST_CASE("packing translates are disjoint") {
  Stream rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(2);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng, 0.0);
    const double a = packing_radius(l, body) * 0.999;
    const ConvexBody k = body.dilate(a);
    // No random point lies in two translates.
    for (int s = 0; s < 300; ++s) {
      Point x(n);
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      Point neg(n);
      for (std::size_t d = 0; d < n; ++d) neg[d] = -x[d];
      // |{l : x in l + aK}| = |L ∩ (x - aK)|; with symmetric K this is count_points(L, aK, x).
      CHECK(count_points(l, k, x) <= 1);
    }
  }
}

TEST_CASE("covering radius upper bounds") {
  const CoveringBound z2 = covering_radius_upper(Lattice::integer(2), ConvexBody::ball({0.0, 0.0}, 1.0), 1.0 / 64);
  CHECK(z2.upper >= std::sqrt(0.5));
  CHECK(z2.upper <= std::sqrt(0.5) + 2.0 / 64);
  CHECK(z2.points_per_axis == 64);
  const CoveringBound hex = covering_radius_upper(hexagonal(), ConvexBody::ball({0.0, 0.0}, 1.0), 1.0 / 64);
  CHECK(hex.upper >= 1.0 / std::sqrt(3.0));
  CHECK(hex.upper <= 1.0 / std::sqrt(3.0) + 2.0 / 64);
  CHECK(hex.grid_estimate <= 1.0 / std::sqrt(3.0) + 1e-12);
  CHECK_THROWS_AS(covering_radius_upper(hexagonal(), ConvexBody::ball({0.0, 0.0}, 1.0), 0.0), ConfigError);
  CoveringOptions tight;
  tight.max_evaluations = 1000;
  CHECK_THROWS_AS(covering_radius_upper(hexagonal(), ConvexBody::ball({0.0, 0.0}, 1.0), 1.0 / 64, tight),
                  EnumerationBudgetExceeded);
}

TEST_CASE("covering bound is sound on random probes") {
  Stream rng(36);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng, 0.4);
    const CoveringBound b = covering_radius_upper(l, body, n == 3 ? 1.0 / 16 : 1.0 / 48);
    CHECK(b.grid_estimate <= b.upper);
    const Point c = body.center();
    const ConvexBody k = body.dilate(b.upper);
    // L + upper (K - c) covers space: every probe x sees a point of L in x + upper (K - c).
    for (int s = 0; s < 200; ++s) {
      Point x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = rng.uniform(-3.0, 3.0) - b.upper * c[d];
      CHECK(count_points(l, k, x) >= 1);
    }
  }
}

TEST_CASE("rho ratio") {
  const RhoBound r = rho_ratio(Lattice::integer(2), ConvexBody::ball({0.0, 0.0}, 1.0), 1.0 / 64);
  CHECK(r.packing == doctest::Approx(0.5));
  CHECK(r.rho_upper == doctest::Approx(r.covering_upper / r.packing));
  CHECK(r.rho_upper >= std::sqrt(2.0));
}

TEST_CASE("residue indices reduce negative coordinates") {
  const std::int64_t k[] = {-1, 7, -12};
  const FpVector expect{4, 2, 3};
  CHECK(residue_index(k, 5) == encode(expect, 5));
}

TEST_CASE("point sets") {
  Stream rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const std::uint64_t p = n == 3 ? 3 : 5;
    const Lattice base = testing::random_lattice(n, rng);
    const std::uint64_t total = oracle::power(p, n);
    std::vector<FpVector> residues;
    std::set<std::uint64_t> chosen;
    for (std::uint64_t i = 0; i < total; ++i) {
      if (rng.uniform_below(3) == 0) {
        residues.push_back(decode(i, p, n));
        chosen.insert(i);
      }
    }
    if (residues.empty()) continue;
    const PointSet set(base, p, residues);
    CHECK(set.size() == chosen.size());
    CHECK(set.density() == doctest::Approx(double(chosen.size()) / base.covolume()));
    const ConvexBody body = testing::random_body(n, rng, 0.5);
    Point x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    // Brute force over the fine lattice, keeping points whose residue is chosen.
    const int reach = n == 3 ? 12 : 30;
    const std::uint64_t side = 2 * reach + 1;
    std::uint64_t expected = 0;
    for (std::uint64_t idx = 0; idx < oracle::power(side, n); ++idx) {
      std::uint64_t rest = idx;
      std::vector<std::int64_t> k(n);
      Eigen::VectorXd kv(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        k[i] = static_cast<std::int64_t>(rest % side) - reach;
        rest /= side;
        kv(static_cast<Eigen::Index>(i)) = double(k[i]);
      }
      if (!chosen.count(residue_index(k, p))) continue;
      const Eigen::VectorXd y = set.fine().basis() * kv;
      Point yy(n);
      for (std::size_t d = 0; d < n; ++d) yy[d] = y(static_cast<Eigen::Index>(d)) - x[d];
      if (body.contains(yy)) {
        ++expected;
        Point pt(y.data(), y.data() + y.size());
        CHECK(set.contains(pt));
      }
    }
    CHECK(count_points_set(set, body, x) == expected);
  }
  CHECK_THROWS_AS(PointSet(Lattice::integer(2), 3, {}), ConfigError);
  CHECK_THROWS_AS(PointSet(Lattice::integer(2), 3, {FpVector{3, 0}}), ConfigError);
}

TEST_CASE("counts are invariant under lattice translations") {
  Stream rng(38);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const Lattice l = testing::random_lattice(n, rng);
    const ConvexBody body = testing::random_body(n, rng, 0.5).dilate(rng.uniform(0.5, 2.0));
    Point x(n), y(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    y = x;
    for (std::size_t i = 0; i < n; ++i) {
      // Small integer shifts keep x + l at comparable magnitude so rounding stays benign.
      const double k = double(static_cast<std::int64_t>(rng.uniform_below(7)) - 3);
      const Point g = l.generator(i);
      for (std::size_t d = 0; d < n; ++d) y[d] += k * g[d];
    }
    CHECK(count_points(l, body, x) == count_points(l, body, y));
  }
}

TEST_CASE("a point set with every residue is the refined lattice") {
  Stream rng(39);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const std::uint64_t p = n == 3 ? 3 : 5;
    const Lattice l = testing::random_lattice(n, rng);
    std::vector<FpVector> all;
    for (std::uint64_t i = 0; i < oracle::power(p, n); ++i) all.push_back(decode(i, p, n));
    const PointSet set(l, p, all);
    const ConvexBody body = testing::random_body(n, rng, 0.5);
    Point x(n);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    CHECK(count_points_set(set, body, x) == count_points(l.scaled(1.0 / double(p)), body, x));
  }
}
