#pragma once

// Lattices g Z^n (generators are the columns of g), point enumeration inside convex
// bodies, nets, Hecke lifts, construction A, and certified radii.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothcover/error.hpp"
#include "smoothcover/fpalg.hpp"
#include "smoothcover/geometry.hpp"
#include "smoothcover/random.hpp"

namespace smoothcover {

/// Node budget for enumeration: SMOOTHCOVER_BUDGET if set, else 10^8.
std::uint64_t default_node_budget();

class Lattice {
 public:
  /// Rejects singular or ill-conditioned bases (||g g^{-1} - I|| > 1e-10).
  explicit Lattice(Eigen::MatrixXd basis);
  static Lattice integer(std::size_t n);

  std::size_t dimension() const { return static_cast<std::size_t>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double covolume() const { return covolume_; }
  /// Generator i (column i of g).
  Point generator(std::size_t i) const;
  bool is_diagonal() const;

  Lattice scaled(double c) const;
  Point coefficients(std::span<const double> y) const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd inverse_;
  double covolume_;
};

namespace detail {

// Depth-first enumeration of coefficient vectors k with g k inside `box` (up to a
// small slack; callers test exact membership). Each level's range for k_j is the
// intersection of the global coefficient bounds with what the box still allows given
// the fixed prefix and the interval hull of the remaining generators.
template <class Visitor>
void enumerate_box(const Lattice& lattice, const AxisBox& box, std::uint64_t budget, Visitor&& visit) {
  const std::size_t n = lattice.dimension();
  const Eigen::MatrixXd& g = lattice.basis();
  const Eigen::MatrixXd& gi = lattice.inverse();

  double scale = 1.0;
  for (std::size_t d = 0; d < n; ++d) {
    scale = std::max({scale, std::abs(box.lower[d]), std::abs(box.upper[d])});
  }
  const double slack = 1e-9 * scale;

  std::vector<std::int64_t> klo(n), khi(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      const double c = gi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
      const double a = c * (box.lower[d] - slack);
      const double b = c * (box.upper[d] + slack);
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    const double eps = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
    klo[i] = static_cast<std::int64_t>(std::ceil(lo - eps));
    khi[i] = static_cast<std::int64_t>(std::floor(hi + eps));
    if (klo[i] > khi[i]) return;
  }

  // hull[j] = interval hull of sum_{i >= j} k_i v_i over the global ranges.
  std::vector<Point> hull_lo(n + 1, Point(n, 0.0)), hull_hi(n + 1, Point(n, 0.0));
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t d = 0; d < n; ++d) {
      const double v = g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j));
      const double a = static_cast<double>(klo[j]) * v;
      const double b = static_cast<double>(khi[j]) * v;
      hull_lo[j][d] = hull_lo[j + 1][d] + std::min(a, b);
      hull_hi[j][d] = hull_hi[j + 1][d] + std::max(a, b);
    }
  }

  std::vector<std::int64_t> k(n, 0);
  std::vector<Point> partial(n + 1, Point(n, 0.0));
  std::uint64_t nodes = 0;

  auto level_range = [&](std::size_t j, std::int64_t& lo, std::int64_t& hi) {
    double flo = static_cast<double>(klo[j]);
    double fhi = static_cast<double>(khi[j]);
    for (std::size_t d = 0; d < n; ++d) {
      const double v = g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j));
      if (v == 0.0) continue;
      // box.lower <= partial + k v + rest <= box.upper for some rest in hull[j+1].
      const double a = (box.lower[d] - slack - partial[j][d] - hull_hi[j + 1][d]) / v;
      const double b = (box.upper[d] + slack - partial[j][d] - hull_lo[j + 1][d]) / v;
      const double eps = 1e-9 * (1.0 + std::abs(a) + std::abs(b));
      flo = std::max(flo, std::min(a, b) - eps);
      fhi = std::min(fhi, std::max(a, b) + eps);
    }
    lo = static_cast<std::int64_t>(std::ceil(flo));
    hi = static_cast<std::int64_t>(std::floor(fhi));
  };

  std::vector<std::int64_t> cur_hi(n);
  std::size_t j = 0;
  level_range(0, k[0], cur_hi[0]);
  --k[0];
  for (;;) {
    ++k[j];
    if (k[j] > cur_hi[j]) {
      if (j == 0) return;
      --j;
      continue;
    }
    if (++nodes > budget) {
      throw EnumerationBudgetExceeded("lattice enumeration exceeded node budget of " + std::to_string(budget));
    }
    for (std::size_t d = 0; d < n; ++d) {
      partial[j + 1][d] = partial[j][d] + static_cast<double>(k[j]) * g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j));
    }
    if (j + 1 == n) {
      visit(std::span<const std::int64_t>(k), std::span<const double>(partial[n]));
      continue;
    }
    ++j;
    level_range(j, k[j], cur_hi[j]);
    --k[j];
  }
}

AxisBox translated(const AxisBox& box, std::span<const double> x);

}  // namespace detail

/// N(L, K, x) = |L ∩ (K + x)|. Membership is tested in ambient space on g k - x.
std::uint64_t count_points(const Lattice& lattice, const ConvexBody& body, std::span<const double> x,
                           std::uint64_t budget = default_node_budget());

/// The p^n points sum a_i v_i, a_i in {0, 1/p, ..., 1 - 1/p}; entry `encode(r)` is
/// the point with p a = r.
std::vector<Point> fundamental_net(const Lattice& lattice, std::uint64_t p, std::uint64_t cap);
Point net_point(const Lattice& lattice, std::uint64_t p, std::span<const Residue> residue);

/// L(S) = (1/p) g pi_p^{-1}(S), basis (1/p) g B^T with B = preimage_basis(S).
Lattice hecke_lift(const Lattice& lattice, const FpSubspace& s);

struct ConstructionA {
  Lattice lattice;
  FpSubspace subspace;
};

/// p^{r/n} (1/p) pi_p^{-1}(S) for S uniform on Gr_{n,r}(F_p); covolume 1.
ConstructionA construction_a(std::uint64_t p, std::size_t r, std::size_t n, Stream& rng);

/// sup{alpha : (L, alpha K) is a packing} = min over nonzero v in L of the gauge of v
/// with respect to K - K.
double packing_radius(const Lattice& lattice, const ConvexBody& body, std::uint64_t budget = default_node_budget());

struct CoveringOptions {
  /// Lattice points g k with k in {-reach, ..., 1 + reach}^n around each grid cell are
  /// candidates for the nearest point. Negative selects 1 for n <= 3 and 0 above.
  int reach = -1;
  /// Node budget for lattice enumeration.
  std::uint64_t budget = default_node_budget();
  /// Cap on grid points times candidates (gauge evaluations).
  std::uint64_t max_evaluations = std::uint64_t{1} << 31;
  bool parallel = true;
};

struct CoveringBound {
  /// Certified upper bound on r_cov,K(L).
  double upper;
  /// max over the grid of the candidate minimum; an estimate only, never certified.
  double grid_estimate;
  std::size_t points_per_axis;
  double slack;
};

/// Upper bound on the covering radius from a coefficient grid of spacing <= h over
/// P_L: max over grid points of min_l gauge(x - l), plus (s/2) sum_i gauge(v_i) for
/// the true spacing s. Uses the gauge about the body's centre (covering radii are
/// translation invariant).
CoveringBound covering_radius_upper(const Lattice& lattice, const ConvexBody& body, double h,
                                    const CoveringOptions& options = {});

struct RhoBound {
  double packing;
  double covering_upper;
  double rho_upper;
};

RhoBound rho_ratio(const Lattice& lattice, const ConvexBody& body, double h, const CoveringOptions& options = {});

/// L(S) for an arbitrary nonempty residue set S ⊂ F_p^n (not necessarily a subspace).
class PointSet {
 public:
  PointSet(Lattice base, std::uint64_t p, std::vector<FpVector> residues);

  const Lattice& base() const { return base_; }
  /// base scaled by 1/p; the coefficients of its points are the residues' lifts.
  const Lattice& fine() const { return fine_; }
  std::uint64_t modulus() const { return p_; }
  std::size_t dimension() const { return base_.dimension(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::uint64_t>& members() const { return members_; }
  bool has_residue(std::uint64_t index) const { return indicator_[index] != 0; }
  /// |residues| / covol(base).
  double density() const { return static_cast<double>(members_.size()) / base_.covolume(); }

  bool contains(std::span<const double> y) const;

 private:
  Lattice base_;
  Lattice fine_;
  std::uint64_t p_;
  std::vector<std::uint64_t> members_;
  std::vector<std::uint8_t> indicator_;
};

/// Residue index of an integer coefficient vector, reduced mod p.
std::uint64_t residue_index(std::span<const std::int64_t> k, std::uint64_t p);

std::uint64_t count_points_set(const PointSet& set, const ConvexBody& body, std::span<const double> x,
                               std::uint64_t budget = default_node_budget());

}  // namespace smoothcover
