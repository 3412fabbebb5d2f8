#include "smoothcover/fpalg.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "smoothcover/error.hpp"

namespace smoothcover {

namespace {

Residue mul_mod(Residue a, Residue b, std::uint64_t p) {
  return static_cast<Residue>((static_cast<unsigned __int128>(a) * b) % p);
}

Residue sub_mod(Residue a, Residue b, std::uint64_t p) {
  return a >= b ? a - b : static_cast<Residue>(a + p - b);
}

// row_dst -= factor * row_src over F_p.
void axpy_row(std::span<Residue> dst, std::span<const Residue> src, Residue factor, std::uint64_t p) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < dst.size(); ++c) {
    if (src[c] != 0) dst[c] = sub_mod(dst[c], mul_mod(factor, src[c], p), p);
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::uint64_t d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

void require_prime_modulus(std::uint64_t p) {
  if (p < 2 || p >= kMaxModulus || !is_prime(p)) {
    throw ConfigError("modulus must be a prime in [2, 2^31), got " + std::to_string(p));
  }
}

std::uint64_t checked_pow(std::uint64_t p, std::size_t k, std::uint64_t cap) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (result > cap / p) {
      throw CapExceeded(std::to_string(p) + "^" + std::to_string(k) + " exceeds cap " + std::to_string(cap));
    }
    result *= p;
  }
  if (result > cap) {
    throw CapExceeded(std::to_string(p) + "^" + std::to_string(k) + " exceeds cap " + std::to_string(cap));
  }
  return result;
}

std::uint64_t encode(std::span<const Residue> v, std::uint64_t p) {
  std::uint64_t index = 0;
  for (std::size_t i = v.size(); i-- > 0;) index = index * p + v[i];
  return index;
}

FpVector decode(std::uint64_t index, std::uint64_t p, std::size_t n) {
  FpVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = static_cast<Residue>(index % p);
    index /= p;
  }
  return v;
}

FpMatrix::FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols)
    : FpMatrix(p, rows, cols, std::vector<Residue>(rows * cols, 0)) {}

FpMatrix::FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols, std::vector<Residue> entries)
    : p_(p), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require_prime_modulus(p);
  if (entries_.size() != rows * cols) throw ConfigError("FpMatrix: entry count does not match shape");
  for (Residue& e : entries_) e = static_cast<Residue>(e % p);
}

Residue inverse_mod(Residue a, std::uint64_t p) {
  if (a % p == 0) throw ConfigError("inverse_mod: zero has no inverse");
  // Fermat: a^(p-2).
  std::uint64_t e = p - 2;
  Residue base = static_cast<Residue>(a % p);
  Residue acc = 1;
  while (e > 0) {
    if (e & 1) acc = mul_mod(acc, base, p);
    base = mul_mod(base, base, p);
    e >>= 1;
  }
  return acc;
}

RrefResult rref(const FpMatrix& m) {
  const std::uint64_t p = m.modulus();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<Residue> a = m.entries();
  auto row = [&](std::size_t r) { return std::span<Residue>(a.data() + r * cols, cols); };

  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t sel = lead;
    while (sel < rows && a[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != lead) std::swap_ranges(row(sel).begin(), row(sel).end(), row(lead).begin());
    const Residue inv = inverse_mod(a[lead * cols + c], p);
    for (Residue& e : row(lead)) e = mul_mod(e, inv, p);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r != lead) axpy_row(row(r), row(lead), a[r * cols + c], p);
    }
    pivots.push_back(c);
    ++lead;
  }
  const std::size_t rank = pivots.size();
  return {FpMatrix(p, rows, cols, std::move(a)), rank, std::move(pivots)};
}

FpSubspace FpSubspace::row_space(const FpMatrix& generators) {
  RrefResult red = rref(generators);
  std::vector<Residue> kept(red.reduced.entries().begin(),
                            red.reduced.entries().begin() + static_cast<std::ptrdiff_t>(red.rank * generators.cols()));
  return FpSubspace(FpMatrix(generators.modulus(), red.rank, generators.cols(), std::move(kept)),
                    std::move(red.pivots));
}

FpSubspace FpSubspace::zero(std::uint64_t p, std::size_t n) { return FpSubspace(FpMatrix(p, 0, n), {}); }

FpSubspace FpSubspace::full(std::uint64_t p, std::size_t n) {
  FpMatrix id(p, n, n);
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) {
    id(i, i) = 1;
    piv[i] = i;
  }
  return FpSubspace(std::move(id), std::move(piv));
}

FpVector FpSubspace::reduce(std::span<const Residue> v) const {
  if (v.size() != dimension()) throw ConfigError("subspace: vector length does not match ambient dimension");
  const std::uint64_t p = modulus();
  FpVector w(v.begin(), v.end());
  for (Residue& e : w) {
    if (e >= p) throw ConfigError("subspace: vector entry not reduced mod p");
  }
  for (std::size_t i = 0; i < rank(); ++i) axpy_row(w, basis_.row(i), w[pivots_[i]], p);
  return w;
}

bool FpSubspace::contains(std::span<const Residue> v) const {
  const FpVector w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](Residue e) { return e == 0; });
}

std::uint64_t FpSubspace::coset_index(std::span<const Residue> v) const {
  const FpVector w = reduce(v);
  const std::uint64_t p = modulus();
  std::uint64_t index = 0;
  std::size_t next_pivot = 0;
  std::uint64_t scale = 1;
  for (std::size_t c = 0; c < w.size(); ++c) {
    if (next_pivot < pivots_.size() && pivots_[next_pivot] == c) {
      ++next_pivot;
      continue;
    }
    index += scale * w[c];
    scale *= p;
  }
  return index;
}

std::vector<FpVector> FpSubspace::enumerate(std::uint64_t cap) const {
  const std::uint64_t p = modulus();
  const std::uint64_t count = checked_pow(p, rank(), cap);
  std::vector<FpVector> out;
  out.reserve(count);
  FpVector coeff(rank(), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    FpVector v(dimension(), 0);
    for (std::size_t i = 0; i < rank(); ++i) {
      if (coeff[i] == 0) continue;
      const auto b = basis_.row(i);
      for (std::size_t c = 0; c < v.size(); ++c) {
        v[c] = static_cast<Residue>((v[c] + static_cast<std::uint64_t>(coeff[i]) * b[c]) % p);
      }
    }
    out.push_back(std::move(v));
    for (std::size_t i = 0; i < rank(); ++i) {
      if (++coeff[i] < p) break;
      coeff[i] = 0;
    }
  }
  return out;
}

FpSubspace sample_uniform_subspace(std::uint64_t p, std::size_t n, std::size_t r, Stream& rng) {
  require_prime_modulus(p);
  if (r > n) throw ConfigError("sample_uniform_subspace: rank exceeds dimension");
  for (;;) {
    std::vector<Residue> entries(r * n);
    for (Residue& e : entries) e = static_cast<Residue>(rng.uniform_below(p));
    FpSubspace s = FpSubspace::row_space(FpMatrix(p, r, n, std::move(entries)));
    if (s.rank() == r) return s;
  }
}

FpSubspace extend_subspace(const FpSubspace& s, std::size_t r, Stream& rng) {
  const std::uint64_t p = s.modulus();
  const std::size_t n = s.dimension();
  if (r < s.rank() || r > n) throw ConfigError("extend_subspace: target rank out of range");
  FpSubspace current = s;
  while (current.rank() < r) {
    std::vector<Residue> entries = current.basis().entries();
    for (std::size_t c = 0; c < n; ++c) entries.push_back(static_cast<Residue>(rng.uniform_below(p)));
    FpSubspace next = FpSubspace::row_space(FpMatrix(p, current.rank() + 1, n, std::move(entries)));
    if (next.rank() == current.rank() + 1) current = std::move(next);
  }
  return current;
}

bool is_subspace_of(const FpSubspace& s, const FpSubspace& t) {
  if (s.modulus() != t.modulus() || s.dimension() != t.dimension()) {
    throw ConfigError("is_subspace_of: modulus or dimension mismatch");
  }
  if (s.rank() > t.rank()) return false;
  for (std::size_t i = 0; i < s.rank(); ++i) {
    if (!t.contains(s.basis().row(i))) return false;
  }
  return true;
}

IntMatrix preimage_basis(const FpSubspace& s) {
  const std::size_t n = s.dimension();
  const auto p = static_cast<std::int64_t>(s.modulus());
  IntMatrix b{n, n, std::vector<std::int64_t>(n * n, 0)};
  std::size_t next_pivot = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (next_pivot < s.rank() && s.pivots()[next_pivot] == c) {
      const auto row = s.basis().row(next_pivot);
      for (std::size_t j = 0; j < n; ++j) b(c, j) = row[j];
      ++next_pivot;
    } else {
      b(c, c) = p;
    }
  }
  return b;
}

__int128 integer_determinant(const IntMatrix& m) {
  if (m.rows != m.cols) throw ConfigError("integer_determinant: matrix is not square");
  const std::size_t n = m.rows;
  if (n == 0) return 1;
  std::vector<__int128> a(m.entries.begin(), m.entries.end());
  auto at = [&](std::size_t r, std::size_t c) -> __int128& { return a[r * n + c]; };
  __int128 sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t sel = k + 1;
      while (sel < n && at(sel, k) == 0) ++sel;
      if (sel == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(sel, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

}  // namespace smoothcover
