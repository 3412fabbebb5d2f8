#include "smoothcover/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothcover/error.hpp"
#include "smoothcover/kernels.hpp"

namespace smoothcover {

namespace {

// | c p^n - |S||A| | / (|S||A|), evaluated from exact integers.
double deviation(std::uint64_t count, std::uint64_t space, std::uint64_t s_size, std::uint64_t a_size) {
  const auto lhs = static_cast<unsigned __int128>(count) * space;
  const auto rhs = static_cast<unsigned __int128>(s_size) * a_size;
  const unsigned __int128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
  return static_cast<double>(static_cast<long double>(diff) / static_cast<long double>(rhs));
}

void require_nonempty(const ASet& a, std::size_t s_size) {
  if (a.size() == 0) throw EmptyInput("discrete smoothness: A is empty");
  if (s_size == 0) throw EmptyInput("discrete smoothness: S is empty");
}

void require_distinct(std::span<const FpVector> s, const ASet& a) {
  std::vector<std::uint64_t> idx;
  idx.reserve(s.size());
  for (const FpVector& v : s) {
    if (v.size() != a.dimension()) throw ConfigError("discrete smoothness: S vector has wrong length");
    for (Residue e : v) {
      if (e >= a.modulus()) throw ConfigError("discrete smoothness: S entry not reduced mod p");
    }
    idx.push_back(encode(v, a.modulus()));
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw ConfigError("discrete smoothness: S has repeated elements");
  }
}

// Extreme integer counts of {k : d k - x in the axis interval} over all real x.
struct AxisRange {
  double min;
  double max;
};

AxisRange axis_counts(double width, double spacing, bool lower_closed, bool upper_closed) {
  const double q = width / spacing;
  const double nearest = std::round(q);
  const bool integral = std::abs(q - nearest) <= 1e-12 * std::max(1.0, q);
  if (!integral) return {std::floor(q), std::floor(q) + 1.0};
  if (lower_closed && upper_closed) return {nearest, nearest + 1.0};
  if (!lower_closed && !upper_closed) return {std::max(0.0, nearest - 1.0), nearest};
  return {nearest, nearest};
}

SmoothnessInterval certify_separable(const Lattice& lattice, const ConvexBody& body) {
  const auto& shape = std::get<BoxShape>(body.shape());
  const AxisBox box = body.bounding_box();
  const std::size_t n = lattice.dimension();
  double max_count = 1.0;
  double min_count = 1.0;
  double expected = 1.0;
  for (std::size_t d = 0; d < n; ++d) {
    const double spacing = std::abs(lattice.basis()(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    const double width = box.upper[d] - box.lower[d];
    const AxisRange r = axis_counts(width, spacing, shape.lower_closed[d], shape.upper_closed[d]);
    max_count *= r.max;
    min_count *= r.min;
    expected *= width / spacing;
  }
  SmoothnessInterval out;
  out.method = SmoothnessInterval::Method::separable;
  out.expected = expected;
  out.ratio_max = max_count / expected;
  out.ratio_min = min_count / expected;
  out.upper = std::max({0.0, out.ratio_max - 1.0, 1.0 - out.ratio_min});
  out.lower = out.upper;
  return out;
}

}  // namespace

ASet::ASet(std::uint64_t p, std::size_t n, std::vector<std::uint64_t> members, Variant variant, double rho,
           std::uint64_t cap)
    : p_(p), n_(n), variant_(variant), rho_(rho), members_(std::move(members)) {
  require_prime_modulus(p);
  if (n == 0) throw ConfigError("A set: dimension must be positive");
  const std::uint64_t total = checked_pow(p, n, cap);
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw ConfigError("A set: repeated member");
  }
  if (!members_.empty() && members_.back() >= total) throw ConfigError("A set: member index out of range");
  indicator_.assign(total, 0);
  for (std::uint64_t m : members_) indicator_[m] = 1;
}

std::string to_string(ASet::Variant v) {
  switch (v) {
    case ASet::Variant::deflated:
      return "deflated";
    case ASet::Variant::nominal:
      return "nominal";
    case ASet::Variant::inflated:
      return "inflated";
  }
  return "unknown";
}

std::string to_string(SmoothnessInterval::Method m) {
  return m == SmoothnessInterval::Method::net ? "net" : "separable";
}

ASet build_a_set(const Lattice& lattice, const ConvexBody& body, std::uint64_t p, ASet::Variant variant, double rho,
                 std::uint64_t cap, std::uint64_t budget) {
  require_prime_modulus(p);
  const std::size_t n = lattice.dimension();
  if (body.dimension() != n) throw ConfigError("build_a_set: dimension mismatch");
  if (!(rho >= 0.0) || (variant == ASet::Variant::deflated && rho >= 1.0)) {
    throw ConfigError("build_a_set: rho must lie in [0, 1) for the deflated set and be >= 0 otherwise");
  }
  const std::uint64_t total = checked_pow(p, n, cap);
  const double packing = packing_radius(lattice, body, budget);
  if (packing < (1.0 + rho) * (1.0 - 1e-12)) {
    throw NotAPacking("build_a_set: packing radius " + std::to_string(packing) + " is below 1 + rho");
  }
  double scale = 1.0;
  if (variant == ASet::Variant::deflated) scale = 1.0 - rho;
  if (variant == ASet::Variant::inflated) scale = 1.0 + rho;
  const ConvexBody target = body.dilate(scale);
  const Lattice fine = lattice.scaled(1.0 / static_cast<double>(p));

  std::vector<std::uint8_t> seen(total, 0);
  std::vector<std::uint64_t> members;
  detail::enumerate_box(fine, target.bounding_box(), budget,
                        [&](std::span<const std::int64_t> k, std::span<const double> y) {
                          if (!target.contains(y)) return;
                          const std::uint64_t idx = residue_index(k, p);
                          if (seen[idx]) {
                            throw ResidueCollision("build_a_set: two points of L/p share residue index " +
                                                   std::to_string(idx));
                          }
                          seen[idx] = 1;
                          members.push_back(idx);
                        });
  return ASet(p, n, std::move(members), variant, rho, cap);
}

std::uint64_t discrete_count(const ASet& a, std::span<const FpVector> s, std::span<const Residue> shift) {
  const std::uint64_t p = a.modulus();
  const std::size_t n = a.dimension();
  if (shift.size() != n) throw ConfigError("discrete_count: shift has wrong length");
  std::uint64_t hits = 0;
  for (const FpVector& v : s) {
    std::uint64_t idx = 0;
    for (std::size_t d = n; d-- > 0;) {
      std::uint64_t c = static_cast<std::uint64_t>(shift[d]) + v[d];
      if (c >= p) c -= p;
      idx = idx * p + c;
    }
    hits += a.contains(idx);
  }
  return hits;
}

double eta_fp_exact(const ASet& a, std::span<const FpVector> s, std::uint64_t cap, bool parallel) {
  require_nonempty(a, s.size());
  require_distinct(s, a);
  const std::uint64_t total = checked_pow(a.modulus(), a.dimension(), cap);
  const std::vector<std::uint32_t> counts = kernels::shift_counts(a.indicator(), a.modulus(), a.dimension(), s, parallel);
  double worst = 0.0;
  for (std::uint32_t c : counts) worst = std::max(worst, deviation(c, total, s.size(), a.size()));
  return worst;
}

double eta_fp_multiset(const ASet& a, std::span<const FpVector> draws, std::uint64_t cap, bool parallel) {
  require_nonempty(a, draws.size());
  for (const FpVector& v : draws) {
    if (v.size() != a.dimension()) throw ConfigError("discrete smoothness: draw has wrong length");
  }
  const std::uint64_t total = checked_pow(a.modulus(), a.dimension(), cap);
  const std::vector<std::uint32_t> counts =
      kernels::shift_counts(a.indicator(), a.modulus(), a.dimension(), draws, parallel);
  double worst = 0.0;
  for (std::uint32_t c : counts) worst = std::max(worst, deviation(c, total, draws.size(), a.size()));
  return worst;
}

double eta_fp_exact(const ASet& a, const FpSubspace& s) {
  if (s.modulus() != a.modulus() || s.dimension() != a.dimension()) {
    throw ConfigError("eta_fp_exact: subspace and A live in different spaces");
  }
  require_nonempty(a, 1);
  const std::uint64_t p = a.modulus();
  const std::size_t n = a.dimension();
  const std::uint64_t cosets = checked_pow(p, n - s.rank(), a.space_size());
  const std::uint64_t s_size = checked_pow(p, s.rank(), a.space_size());
  std::vector<std::uint64_t> histogram(cosets, 0);
  for (std::uint64_t m : a.members()) ++histogram[s.coset_index(decode(m, p, n))];
  double worst = 0.0;
  for (std::uint64_t c : histogram) worst = std::max(worst, deviation(c, a.space_size(), s_size, a.size()));
  return worst;
}

double eta_fp_sampled(const ASet& a, std::span<const FpVector> s, std::uint64_t samples, const Stream& rng) {
  require_nonempty(a, s.size());
  if (samples >= a.space_size()) return eta_fp_exact(a, s, a.space_size());
  require_distinct(s, a);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Stream draw = rng.child(i);
    const FpVector x = decode(draw.uniform_below(a.space_size()), a.modulus(), a.dimension());
    worst = std::max(worst, deviation(discrete_count(a, s, x), a.space_size(), s.size(), a.size()));
  }
  return worst;
}

SmoothnessInterval eta_certified(const Lattice& lattice, const ConvexBody& body, std::uint64_t net_p, double h,
                                 const CertifyOptions& options) {
  const std::size_t n = lattice.dimension();
  if (body.dimension() != n) throw ConfigError("eta_certified: dimension mismatch");
  const bool separable = lattice.is_diagonal() && body.is_box();
  if (options.method == CertifyOptions::Method::separable && !separable) {
    throw Unsupported("eta_certified: the separable count needs a box over a diagonal lattice");
  }
  if (options.method == CertifyOptions::Method::separable ||
      (options.method == CertifyOptions::Method::automatic && separable)) {
    SmoothnessInterval out = certify_separable(lattice, body);
    out.net_p = net_p;
    return out;
  }

  require_prime_modulus(net_p);
  const CoveringBound cov = covering_radius_upper(lattice, body, h, options.covering);
  const double rho = cov.upper / static_cast<double>(net_p);
  if (!(rho < 1.0)) {
    throw NoCoveringCertificate("eta_certified: covering dilate " + std::to_string(rho) +
                                " of the net lattice is not below 1; increase net_p");
  }
  const std::vector<Point> net = fundamental_net(lattice, net_p, options.net_cap);
  const double expected = body.exact_volume() / lattice.covolume();
  const std::uint64_t budget = options.covering.budget;

  const auto inflated = kernels::count_at(lattice, body.dilate(1.0 + rho), net, budget, options.parallel);
  const auto deflated = kernels::count_at(lattice, body.dilate(1.0 - rho), net, budget, options.parallel);
  const auto nominal = kernels::count_at(lattice, body, net, budget, options.parallel);

  const double max_in = static_cast<double>(*std::max_element(inflated.begin(), inflated.end()));
  const double min_out = static_cast<double>(*std::min_element(deflated.begin(), deflated.end()));
  double lower = 0.0;
  for (std::uint64_t c : nominal) lower = std::max(lower, std::abs(static_cast<double>(c) / expected - 1.0));

  SmoothnessInterval out;
  out.method = SmoothnessInterval::Method::net;
  out.rho = rho;
  out.net_p = net_p;
  out.expected = expected;
  out.ratio_max = max_in / expected;
  out.ratio_min = min_out / expected;
  out.upper = std::max({0.0, out.ratio_max - 1.0, 1.0 - out.ratio_min});
  out.lower = lower;
  return out;
}

DilateReport verify_smooth_all_dilates(const Lattice& lattice, const ConvexBody& body, double epsilon,
                                       std::uint64_t net_p, double h, const CertifyOptions& options) {
  if (!(epsilon > 0.0)) throw ConfigError("verify_smooth_all_dilates: epsilon must be positive");
  const double n = static_cast<double>(lattice.dimension());
  const double beta = epsilon / (8.0 * n);
  const auto last = static_cast<std::size_t>(std::ceil(std::log(2.0) / std::log1p(beta)));
  DilateReport report{true, beta, last, std::nullopt, {}};
  for (std::size_t i = 0; i <= last; ++i) {
    const double alpha = std::pow(1.0 + beta, static_cast<double>(i));
    const SmoothnessInterval iv = eta_certified(lattice, body.dilate(alpha), net_p, h, options);
    const bool pass = iv.upper <= epsilon / 2.0;
    report.rows.push_back({i, alpha, iv.upper, pass});
    if (!pass && !report.failing_index) {
      report.failing_index = i;
      report.certified = false;
    }
  }
  return report;
}

RandomPointSet random_point_set(std::uint64_t p, std::size_t n, std::uint64_t m, const Stream& rng) {
  require_prime_modulus(p);
  if (m == 0) throw ConfigError("random_point_set: m must be at least 1");
  const std::uint64_t total = checked_pow(p, n, std::numeric_limits<std::uint64_t>::max());
  RandomPointSet out{{}, {}, true};
  out.draws.reserve(m);
  std::vector<std::uint64_t> sorted;
  sorted.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    Stream draw = rng.child(i);
    const std::uint64_t v = draw.uniform_below(total);
    out.draws.push_back(v);
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), v);
    if (pos != sorted.end() && *pos == v) {
      out.distinct = false;
      continue;
    }
    sorted.insert(pos, v);
    out.members.push_back(v);
  }
  return out;
}

std::uint64_t lemma51_threshold(std::uint64_t p, std::size_t n, double tau, double delta, std::uint64_t a_size) {
  require_prime_modulus(p);
  if (a_size == 0) throw ConfigError("lemma51_threshold: |A| must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("lemma51_threshold: tau must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("lemma51_threshold: delta must lie in (0, 1]");
  const long double t = 3.0L / (static_cast<long double>(tau) * tau) *
                        (static_cast<long double>(n) * std::log(static_cast<long double>(p)) -
                         std::log(static_cast<long double>(delta) / 2.0L));
  const long double space = std::pow(static_cast<long double>(p), static_cast<long double>(n));
  const long double bound = t * space / static_cast<long double>(a_size);
  return static_cast<std::uint64_t>(std::floor(bound)) + 1;
}

double chernoff_rhs(double eta, double mu) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("chernoff_rhs: eta must lie in (0, 1]");
  if (!(mu >= 0.0)) throw ConfigError("chernoff_rhs: mu must be nonnegative");
  return std::clamp(2.0 * std::exp(-eta * eta * mu / 3.0), 0.0, 2.0);
}

}  // namespace smoothcover
