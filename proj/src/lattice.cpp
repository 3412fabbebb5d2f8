#include "smoothcover/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "smoothcover/kernels.hpp"

namespace smoothcover {

std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("SMOOTHCOVER_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw ConfigError(std::string("SMOOTHCOVER_BUDGET is not a positive integer: ") + env);
  }
  return 100'000'000ULL;
}

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  const Eigen::Index n = basis_.rows();
  if (n == 0 || basis_.cols() != n) throw ConfigError("lattice: basis must be a nonempty square matrix");
  if (!basis_.allFinite()) throw ConfigError("lattice: basis has non-finite entries");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_);
  const double det = lu.determinant();
  if (det == 0.0 || !std::isfinite(det)) throw ConfigError("lattice: basis is singular");
  inverse_ = lu.inverse();
  const double residual = (basis_ * inverse_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw ConfigError("lattice: basis is ill-conditioned (residual " + std::to_string(residual) + ")");
  }
  covolume_ = std::abs(det);
}

Lattice Lattice::integer(std::size_t n) {
  return Lattice(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

Point Lattice::generator(std::size_t i) const {
  const auto col = basis_.col(static_cast<Eigen::Index>(i));
  return Point(col.data(), col.data() + col.size());
}

bool Lattice::is_diagonal() const {
  for (Eigen::Index r = 0; r < basis_.rows(); ++r) {
    for (Eigen::Index c = 0; c < basis_.cols(); ++c) {
      if (r != c && basis_(r, c) != 0.0) return false;
    }
  }
  return true;
}

Lattice Lattice::scaled(double c) const {
  if (!(c > 0) || !std::isfinite(c)) throw ConfigError("lattice: scale must be positive");
  return Lattice(basis_ * c);
}

Point Lattice::coefficients(std::span<const double> y) const {
  if (y.size() != dimension()) throw ConfigError("lattice: point dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::VectorXd k = inverse_ * v;
  return Point(k.data(), k.data() + k.size());
}

namespace detail {

AxisBox translated(const AxisBox& box, std::span<const double> x) {
  AxisBox out = box;
  for (std::size_t d = 0; d < x.size(); ++d) {
    out.lower[d] += x[d];
    out.upper[d] += x[d];
  }
  return out;
}

}  // namespace detail

std::uint64_t count_points(const Lattice& lattice, const ConvexBody& body, std::span<const double> x,
                           std::uint64_t budget) {
  const std::size_t n = lattice.dimension();
  if (body.dimension() != n || x.size() != n) throw ConfigError("count_points: dimension mismatch");
  const AxisBox box = detail::translated(body.bounding_box(), x);
  std::uint64_t count = 0;
  Point z(n);
  detail::enumerate_box(lattice, box, budget, [&](std::span<const std::int64_t>, std::span<const double> y) {
    for (std::size_t d = 0; d < n; ++d) z[d] = y[d] - x[d];
    if (body.contains(z)) ++count;
  });
  return count;
}

Point net_point(const Lattice& lattice, std::uint64_t p, std::span<const Residue> residue) {
  const std::size_t n = lattice.dimension();
  if (residue.size() != n) throw ConfigError("net_point: residue length mismatch");
  const Eigen::MatrixXd& g = lattice.basis();
  const double inv_p = 1.0 / static_cast<double>(p);
  Point x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (residue[i] == 0) continue;
    for (std::size_t d = 0; d < n; ++d) {
      x[d] += static_cast<double>(residue[i]) * (g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) * inv_p);
    }
  }
  return x;
}

std::vector<Point> fundamental_net(const Lattice& lattice, std::uint64_t p, std::uint64_t cap) {
  require_prime_modulus(p);
  const std::size_t n = lattice.dimension();
  const std::uint64_t total = checked_pow(p, n, cap);
  std::vector<Point> out;
  out.reserve(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) out.push_back(net_point(lattice, p, decode(idx, p, n)));
  return out;
}

Lattice hecke_lift(const Lattice& lattice, const FpSubspace& s) {
  const std::size_t n = lattice.dimension();
  if (s.dimension() != n) throw ConfigError("hecke_lift: subspace dimension does not match lattice");
  const IntMatrix b = preimage_basis(s);
  Eigen::MatrixXd bt(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double p = static_cast<double>(s.modulus());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) bt(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = static_cast<double>(b(r, c)) / p;
  }
  return Lattice(lattice.basis() * bt);
}

ConstructionA construction_a(std::uint64_t p, std::size_t r, std::size_t n, Stream& rng) {
  if (r < 1 || r > n) throw ConfigError("construction_a: need 1 <= r <= n");
  FpSubspace s = sample_uniform_subspace(p, n, r, rng);
  const double scale = std::pow(static_cast<double>(p), static_cast<double>(r) / static_cast<double>(n));
  Lattice lattice = hecke_lift(Lattice::integer(n), s).scaled(scale);
  if (std::abs(lattice.covolume() - 1.0) > 1e-9) {
    throw Error("construction_a: covolume " + std::to_string(lattice.covolume()) + " differs from 1");
  }
  return {std::move(lattice), std::move(s)};
}

double packing_radius(const Lattice& lattice, const ConvexBody& body, std::uint64_t budget) {
  const std::size_t n = lattice.dimension();
  if (body.dimension() != n) throw ConfigError("packing_radius: dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, body.difference_gauge(lattice.generator(i)));
  // Every v with gauge <= best lies in best * (K - K), inside this box.
  const Point hw = body.difference_halfwidths();
  AxisBox box{Point(n), Point(n)};
  for (std::size_t d = 0; d < n; ++d) {
    box.lower[d] = -best * hw[d];
    box.upper[d] = best * hw[d];
  }
  detail::enumerate_box(lattice, box, budget, [&](std::span<const std::int64_t> k, std::span<const double> y) {
    if (std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; })) return;
    const double g = body.difference_gauge(y);
    if (g < best) best = g;
  });
  return best;
}

CoveringBound covering_radius_upper(const Lattice& lattice, const ConvexBody& body, double h,
                                    const CoveringOptions& options) {
  const std::size_t n = lattice.dimension();
  if (body.dimension() != n) throw ConfigError("covering_radius_upper: dimension mismatch");
  if (!(h > 0) || h > 1) throw ConfigError("covering_radius_upper: grid resolution must lie in (0, 1]");
  const int reach = options.reach >= 0 ? options.reach : (n <= 3 ? 1 : 0);
  const auto per_axis = static_cast<std::size_t>(std::ceil(1.0 / h - 1e-12));
  const double spacing = 1.0 / static_cast<double>(per_axis);

  // Candidate lattice points around the cell P_L.
  const auto span = static_cast<std::int64_t>(2 + 2 * reach);
  std::uint64_t candidate_count = 1;
  std::uint64_t grid_count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    candidate_count *= static_cast<std::uint64_t>(span);
    grid_count *= per_axis;
  }
  const long double work = static_cast<long double>(candidate_count) * static_cast<long double>(grid_count);
  if (work > static_cast<long double>(options.max_evaluations)) {
    throw EnumerationBudgetExceeded("covering grid needs " + std::to_string(static_cast<double>(work)) +
                                    " gauge evaluations, limit " + std::to_string(options.max_evaluations));
  }
  std::vector<Point> candidates;
  candidates.reserve(candidate_count);
  const Eigen::MatrixXd& g = lattice.basis();
  for (std::uint64_t idx = 0; idx < candidate_count; ++idx) {
    Point l(n, 0.0);
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(span)) - reach);
      rest /= static_cast<std::uint64_t>(span);
      for (std::size_t d = 0; d < n; ++d) l[d] += k * g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i));
    }
    candidates.push_back(std::move(l));
  }

  const double grid_max = options.parallel
                              ? kernels::covering_grid_max_parallel(lattice, body, per_axis, candidates)
                              : kernels::covering_grid_max_serial(lattice, body, per_axis, candidates);
  double generator_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Point v = lattice.generator(i);
    double gv = body.centered_gauge(v);
    for (double& e : v) e = -e;
    generator_sum += std::max(gv, body.centered_gauge(v));
  }
  const double slack = 0.5 * spacing * generator_sum;
  // Relative inflation absorbs floating-point error in the gauge evaluations.
  const double upper = (grid_max + slack) * (1.0 + 1e-12);
  return {upper, grid_max, per_axis, slack};
}

RhoBound rho_ratio(const Lattice& lattice, const ConvexBody& body, double h, const CoveringOptions& options) {
  const double pack = packing_radius(lattice, body, options.budget);
  const CoveringBound cov = covering_radius_upper(lattice, body, h, options);
  return {pack, cov.upper, cov.upper / pack};
}

std::uint64_t residue_index(std::span<const std::int64_t> k, std::uint64_t p) {
  const auto sp = static_cast<std::int64_t>(p);
  std::uint64_t idx = 0;
  for (std::size_t i = k.size(); i-- > 0;) {
    std::int64_t r = k[i] % sp;
    if (r < 0) r += sp;
    idx = idx * p + static_cast<std::uint64_t>(r);
  }
  return idx;
}

PointSet::PointSet(Lattice base, std::uint64_t p, std::vector<FpVector> residues)
    : base_(std::move(base)), fine_(base_.scaled(1.0 / static_cast<double>(p))), p_(p) {
  require_prime_modulus(p);
  if (residues.empty()) throw ConfigError("point set: residue set is empty");
  const std::size_t n = base_.dimension();
  const std::uint64_t total = checked_pow(p, n, std::uint64_t{1} << 32);
  indicator_.assign(total, 0);
  for (const FpVector& r : residues) {
    if (r.size() != n) throw ConfigError("point set: residue length mismatch");
    for (Residue e : r) {
      if (e >= p) throw ConfigError("point set: residue entry not reduced mod p");
    }
    indicator_[encode(r, p)] = 1;
  }
  for (std::uint64_t i = 0; i < total; ++i) {
    if (indicator_[i]) members_.push_back(i);
  }
}

bool PointSet::contains(std::span<const double> y) const {
  const Point c = fine_.coefficients(y);
  std::vector<std::int64_t> k(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = std::round(c[i]);
    if (std::abs(c[i] - r) > 1e-9 * (1.0 + std::abs(c[i]))) return false;
    k[i] = static_cast<std::int64_t>(r);
  }
  return has_residue(residue_index(k, p_));
}

std::uint64_t count_points_set(const PointSet& set, const ConvexBody& body, std::span<const double> x,
                               std::uint64_t budget) {
  const std::size_t n = set.dimension();
  if (body.dimension() != n || x.size() != n) throw ConfigError("count_points_set: dimension mismatch");
  const AxisBox box = detail::translated(body.bounding_box(), x);
  std::uint64_t count = 0;
  Point z(n);
  detail::enumerate_box(set.fine(), box, budget, [&](std::span<const std::int64_t> k, std::span<const double> y) {
    if (!set.has_residue(residue_index(k, set.modulus()))) return;
    for (std::size_t d = 0; d < n; ++d) z[d] = y[d] - x[d];
    if (body.contains(z)) ++count;
  });
  return count;
}

}  // namespace smoothcover
