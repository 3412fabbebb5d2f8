#pragma once

// Independent reference computations. None of these call the routine they check;
// they trade speed for directness (exhaustive loops, closed forms, sieves).

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "smoothcover/fpalg.hpp"
#include "smoothcover/geometry.hpp"

namespace smoothcover::oracle {

inline std::vector<bool> sieve(std::uint64_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = false;
  if (limit >= 1) prime[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (!prime[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) prime[j] = false;
  }
  return prime;
}

inline std::uint64_t power(std::uint64_t p, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= p;
  return r;
}

/// v_i = (index / p^i) mod p, computed by repeated division.
inline std::vector<std::uint32_t> digits(std::uint64_t index, std::uint64_t p, std::size_t n) {
  std::vector<std::uint32_t> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  return d;
}

inline std::uint64_t index_of(const std::vector<std::uint32_t>& v, std::uint64_t p) {
  std::uint64_t idx = 0, w = 1;
  for (std::uint32_t e : v) {
    idx += e * w;
    w *= p;
  }
  return idx;
}

/// Rank over F_p by column-by-column elimination with Fermat inverses.
inline std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t p) {
  auto inv = [p](std::int64_t a) {
    std::int64_t r = 1, b = a % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::int64_t iv = inv(((rows[rank][c] % p) + p) % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      const std::int64_t f = ((rows[r][c] % p) + p) % p * iv % p;
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Every F_p-combination of the generator rows, as indices.
inline std::set<std::uint64_t> span_indices(const std::vector<std::vector<std::uint32_t>>& gens, std::uint64_t p,
                                            std::size_t n) {
  std::set<std::uint64_t> out;
  const std::uint64_t combos = power(p, gens.size());
  for (std::uint64_t c = 0; c < combos; ++c) {
    const auto coef = digits(c, p, gens.size());
    std::vector<std::uint32_t> v(n, 0);
    for (std::size_t g = 0; g < gens.size(); ++g) {
      for (std::size_t d = 0; d < n; ++d) v[d] = static_cast<std::uint32_t>((v[d] + std::uint64_t{coef[g]} * gens[g][d]) % p);
    }
    out.insert(index_of(v, p));
  }
  return out;
}

/// Number of r-dimensional subspaces of F_p^n (Gaussian binomial).
inline std::uint64_t grassmannian_size(std::uint64_t p, std::size_t n, std::size_t r) {
  std::uint64_t num = 1, den = 1;
  for (std::size_t i = 0; i < r; ++i) {
    num *= power(p, n - i) - 1;
    den *= power(p, i + 1) - 1;
  }
  return num / den;
}

/// Determinant by permutation expansion (n <= 6).
inline __int128 det_permutations(const std::vector<std::vector<std::int64_t>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  __int128 total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    __int128 term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// |{k in [-reach, reach]^n : g k - x in K}| by exhaustive enumeration.
inline std::uint64_t count_points(const Eigen::MatrixXd& g, const ConvexBody& body, const Point& x, int reach) {
  const std::size_t n = x.size();
  const std::uint64_t side = static_cast<std::uint64_t>(2 * reach + 1);
  const std::uint64_t total = power(side, n);
  std::uint64_t count = 0;
  Point y(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    Eigen::VectorXd k(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      k(static_cast<Eigen::Index>(i)) = static_cast<double>(static_cast<std::int64_t>(rest % side) - reach);
      rest /= side;
    }
    const Eigen::VectorXd v = g * k;
    for (std::size_t d = 0; d < n; ++d) y[d] = v(static_cast<Eigen::Index>(d)) - x[d];
    count += body.contains(y);
  }
  return count;
}

/// Smallest t with x in t K (about the origin), by bisection on membership.
inline double gauge_bisect(const ConvexBody& body, const Point& x, double hi = 1e6) {
  double lo = 0.0;
  Point y(x.size());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    for (std::size_t d = 0; d < x.size(); ++d) y[d] = x[d] / mid;
    if (body.contains(y)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// |(x + S) ∩ A| for every shift x, summing over A: x + s = a iff a - x in S.
inline std::vector<std::uint64_t> shift_counts(const std::set<std::uint64_t>& a, const std::set<std::uint64_t>& s,
                                               std::uint64_t p, std::size_t n) {
  const std::uint64_t total = power(p, n);
  std::vector<std::uint64_t> out(total, 0);
  for (std::uint64_t x = 0; x < total; ++x) {
    const auto xd = digits(x, p, n);
    for (std::uint64_t ai : a) {
      auto ad = digits(ai, p, n);
      for (std::size_t d = 0; d < n; ++d) ad[d] = static_cast<std::uint32_t>((ad[d] + p - xd[d]) % p);
      out[x] += s.count(index_of(ad, p));
    }
  }
  return out;
}

inline double eta_from_counts(const std::vector<std::uint64_t>& counts, std::uint64_t s_size, std::uint64_t a_size) {
  const double expected = static_cast<double>(s_size) * static_cast<double>(a_size) / static_cast<double>(counts.size());
  double worst = 0.0;
  for (std::uint64_t c : counts) worst = std::max(worst, std::abs(static_cast<double>(c) / expected - 1.0));
  return worst;
}

/// Probability that m uniform draws from N values are not all distinct.
inline double birthday(std::uint64_t m, std::uint64_t total) {
  double keep = 1.0;
  for (std::uint64_t i = 1; i < m; ++i) keep *= 1.0 - static_cast<double>(i) / static_cast<double>(total);
  return 1.0 - keep;
}

/// P(X <= k) for X ~ Binomial(n, q), by direct summation.
inline double binomial_cdf(std::uint64_t k, std::uint64_t n, double q) {
  double total = 0.0;
  for (std::uint64_t i = 0; i <= k; ++i) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                      static_cast<double>(i) * std::log(q) + static_cast<double>(n - i) * std::log1p(-q));
  }
  return total;
}

}  // namespace smoothcover::oracle
