#pragma once

// Random instance generators shared by the tests and the acceptance suite.

#include <Eigen/Dense>
#include <cmath>

#include "smoothcover/geometry.hpp"
#include "smoothcover/lattice.hpp"
#include "smoothcover/random.hpp"

namespace smoothcover::testing {

/// Basis with entries in [-1, 1] plus the identity, |det| >= 0.25, rescaled to covolume 1.
inline Lattice random_lattice(std::size_t n, Stream& rng) {
  const auto ni = static_cast<Eigen::Index>(n);
  for (;;) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(ni, ni);
    for (Eigen::Index r = 0; r < ni; ++r) {
      for (Eigen::Index c = 0; c < ni; ++c) g(r, c) += rng.uniform(-0.6, 0.6);
    }
    const double det = std::abs(g.determinant());
    if (det < 0.25) continue;
    return Lattice(g / std::pow(det, 1.0 / static_cast<double>(n)));
  }
}

inline Eigen::MatrixXd random_spd(std::size_t n, Stream& rng) {
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(ni, ni);
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
  }
  return m.transpose() * m + 0.4 * Eigen::MatrixXd::Identity(ni, ni);
}

/// Ball, ellipsoid or box of unit-order size, centred within `offset` of the origin.
inline ConvexBody random_body(std::size_t n, Stream& rng, double offset = 0.3) {
  Point c(n);
  for (double& v : c) v = rng.uniform(-offset, offset);
  switch (rng.uniform_below(3)) {
    case 0:
      return ConvexBody::ball(c, rng.uniform(0.5, 1.5));
    case 1:
      return ConvexBody::ellipsoid(c, random_spd(n, rng));
    default: {
      Point lo(n), hi(n);
      std::vector<bool> lc(n), uc(n);
      for (std::size_t d = 0; d < n; ++d) {
        const double w = rng.uniform(0.6, 2.0);
        lo[d] = c[d] - w / 2;
        hi[d] = c[d] + w / 2;
        lc[d] = rng.uniform_below(2) == 0;
        uc[d] = rng.uniform_below(2) == 0;
      }
      return ConvexBody::box(lo, hi, lc, uc);
    }
  }
}

/// Uniform point of the fundamental parallelepiped of L.
inline Point random_cell_point(const Lattice& lattice, Stream& rng) {
  const std::size_t n = lattice.dimension();
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.uniform01();
  const Eigen::VectorXd x = lattice.basis() * a;
  return Point(x.data(), x.data() + x.size());
}

}  // namespace smoothcover::testing
