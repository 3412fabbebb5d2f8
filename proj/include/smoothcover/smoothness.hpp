#pragma once

// Covering smoothness eta(K, L) as certified intervals, discrete smoothness over F_p^n,
// the residue sets A bridging the two, the dilate-net verifier, and random point sets.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothcover/fpalg.hpp"
#include "smoothcover/geometry.hpp"
#include "smoothcover/lattice.hpp"
#include "smoothcover/random.hpp"

namespace smoothcover {

/// Default cap on p^n for anything materialized over F_p^n or a fundamental net.
inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

/// A subset of F_p^n stored as sorted encode() indices plus an indicator over all of F_p^n.
class ASet {
 public:
  enum class Variant { deflated, nominal, inflated };

  /// Members must be distinct indices below p^n.
  ASet(std::uint64_t p, std::size_t n, std::vector<std::uint64_t> members, Variant variant = Variant::nominal,
       double rho = 0.0, std::uint64_t cap = kDefaultCap);

  std::uint64_t modulus() const { return p_; }
  std::size_t dimension() const { return n_; }
  Variant variant() const { return variant_; }
  double rho() const { return rho_; }
  std::size_t size() const { return members_.size(); }
  std::uint64_t space_size() const { return indicator_.size(); }
  const std::vector<std::uint64_t>& members() const { return members_; }
  const std::vector<std::uint8_t>& indicator() const { return indicator_; }
  bool contains(std::uint64_t index) const { return indicator_[index] != 0; }
  bool contains(std::span<const Residue> v) const { return contains(encode(v, p_)); }

 private:
  std::uint64_t p_;
  std::size_t n_;
  Variant variant_;
  double rho_;
  std::vector<std::uint64_t> members_;
  std::vector<std::uint8_t> indicator_;
};

std::string to_string(ASet::Variant v);

/// Residues of the points of L/p inside (1-rho)K, K or (1+rho)K. Requires
/// packing_radius(L, K) >= 1 + rho; a residue hit twice is a ResidueCollision.
ASet build_a_set(const Lattice& lattice, const ConvexBody& body, std::uint64_t p, ASet::Variant variant, double rho,
                 std::uint64_t cap = kDefaultCap, std::uint64_t budget = default_node_budget());

/// |(x + S) ∩ A| for one shift x.
std::uint64_t discrete_count(const ASet& a, std::span<const FpVector> s, std::span<const Residue> shift);

/// sup over x in F_p^n of | |(x+S) ∩ A| / (|S| |A| p^-n) - 1 |, by direct summation over
/// every shift. S must be nonempty with distinct entries.
double eta_fp_exact(const ASet& a, std::span<const FpVector> s, std::uint64_t cap = kDefaultCap,
                    bool parallel = true);
/// Same quantity for a subspace, from the histogram of A over the cosets of S.
double eta_fp_exact(const ASet& a, const FpSubspace& s);

/// Deviation with draws counted with multiplicity: sup over x of
/// | #{i : x + s_i in A} / (m |A| p^-n) - 1 | for m draws. Equals eta_fp_exact on distinct
/// draws.
double eta_fp_multiset(const ASet& a, std::span<const FpVector> draws, std::uint64_t cap = kDefaultCap,
                       bool parallel = true);

/// Max deviation over `samples` uniform shifts, shift i drawn from rng.child(i). With
/// samples >= p^n every shift is evaluated instead, giving the exact value.
double eta_fp_sampled(const ASet& a, std::span<const FpVector> s, std::uint64_t samples, const Stream& rng);

struct SmoothnessInterval {
  enum class Method { net, separable };
  double lower = 0.0;
  double upper = 0.0;
  double rho = 0.0;
  std::uint64_t net_p = 0;
  /// Lower bound on inf_x N(L, K, x) / (vol K / covol L).
  double ratio_min = 0.0;
  /// Upper bound on sup_x N(L, K, x) / (vol K / covol L).
  double ratio_max = 0.0;
  double expected = 0.0;
  Method method = Method::net;
};

std::string to_string(SmoothnessInterval::Method m);

struct CertifyOptions {
  enum class Method { automatic, net, separable };
  /// automatic uses the separable count for a box over a diagonal lattice and the net
  /// otherwise.
  Method method = Method::automatic;
  CoveringOptions covering{};
  std::uint64_t net_cap = kDefaultCap;
  bool parallel = true;
};

/// Net route: rho = covering_radius_upper(L, K, h) / net_p; the upper bound compares
/// inflated and deflated counts over the fundamental net of L / net_p, the lower bound
/// is the largest deviation of N(L, K, x') at those net points.
/// Separable route: exact per-axis extreme counts, lower = upper.
SmoothnessInterval eta_certified(const Lattice& lattice, const ConvexBody& body, std::uint64_t net_p, double h,
                                 const CertifyOptions& options = {});

struct DilateRow {
  std::size_t index;
  double alpha;
  double eta_upper;
  bool pass;
};

struct DilateReport {
  bool certified;
  double beta;
  std::size_t last_index;
  std::optional<std::size_t> failing_index;
  std::vector<DilateRow> rows;
};

/// Certifies eta(alpha K, L) < epsilon for every alpha >= 1 by checking
/// eta_certified(L, (1+beta)^i K).upper <= epsilon/2 for i = 0..I, beta = epsilon/(8n),
/// I = ceil(log 2 / log(1+beta)). All dilates are evaluated; failing_index is the first
/// failure.
DilateReport verify_smooth_all_dilates(const Lattice& lattice, const ConvexBody& body, double epsilon,
                                       std::uint64_t net_p, double h, const CertifyOptions& options = {});

struct RandomPointSet {
  /// All draws in order, as encode() indices.
  std::vector<std::uint64_t> draws;
  /// Distinct draws in first-occurrence order.
  std::vector<std::uint64_t> members;
  bool distinct;
};

/// m i.i.d. uniform draws from F_p^n; draw i comes from rng.child(i).
RandomPointSet random_point_set(std::uint64_t p, std::size_t n, std::uint64_t m, const Stream& rng);

/// Least m with m |A| p^-n > 3/tau^2 (n ln p - ln(delta/2)).
std::uint64_t lemma51_threshold(std::uint64_t p, std::size_t n, double tau, double delta, std::uint64_t a_size);

/// 2 exp(-eta^2 mu / 3), eta in (0, 1], mu >= 0.
double chernoff_rhs(double eta, double mu);

}  // namespace smoothcover
