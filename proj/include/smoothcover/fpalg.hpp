#pragma once

// Exact linear algebra over prime fields F_p, p < 2^31.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smoothcover/random.hpp"

namespace smoothcover {

using Residue = std::uint32_t;
using FpVector = std::vector<Residue>;

/// Largest modulus accepted anywhere in the library.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

/// Deterministic trial division; fine for the magnitudes used here (< 2^62).
bool is_prime(std::uint64_t n);

/// Throws ConfigError unless 2 <= p < 2^31 and p is prime.
void require_prime_modulus(std::uint64_t p);

/// p^k, throwing CapExceeded when the result would exceed `cap`.
std::uint64_t checked_pow(std::uint64_t p, std::size_t k, std::uint64_t cap);

/// Little-endian mixed-radix index of v in F_p^n: sum v_i p^i.
std::uint64_t encode(std::span<const Residue> v, std::uint64_t p);
FpVector decode(std::uint64_t index, std::uint64_t p, std::size_t n);

class FpMatrix {
 public:
  FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols);
  /// Entries are reduced mod p; negative inputs are not accepted.
  FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols, std::vector<Residue> entries);

  std::uint64_t modulus() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Residue operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  Residue& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  std::span<const Residue> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  const std::vector<Residue>& entries() const { return entries_; }

  bool operator==(const FpMatrix&) const = default;

 private:
  std::uint64_t p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> entries_;
};

struct RrefResult {
  FpMatrix reduced;
  std::size_t rank;
  std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form over F_p. Zero rows are kept at the bottom.
RrefResult rref(const FpMatrix& m);

Residue inverse_mod(Residue a, std::uint64_t p);

/// A subspace of F_p^n stored by its canonical RREF basis (rank rows, no zero rows).
/// Two subspaces are equal iff their bases are identical.
class FpSubspace {
 public:
  static FpSubspace row_space(const FpMatrix& generators);
  static FpSubspace zero(std::uint64_t p, std::size_t n);
  static FpSubspace full(std::uint64_t p, std::size_t n);

  std::uint64_t modulus() const { return basis_.modulus(); }
  std::size_t dimension() const { return basis_.cols(); }
  std::size_t rank() const { return basis_.rows(); }
  const FpMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Residue> v) const;

  /// Reduces v against the basis; the result is zero on pivot columns and is a
  /// canonical representative of the coset v + S.
  FpVector reduce(std::span<const Residue> v) const;

  /// Index of the coset v + S in [0, p^(n-r)), read off the non-pivot coordinates of reduce(v).
  std::uint64_t coset_index(std::span<const Residue> v) const;

  /// All p^r members; CapExceeded if p^r > cap.
  std::vector<FpVector> enumerate(std::uint64_t cap) const;

  bool operator==(const FpSubspace&) const = default;

 private:
  explicit FpSubspace(FpMatrix basis, std::vector<std::size_t> pivots)
      : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  FpMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Exactly uniform draw from Gr_{n,r}(F_p): i.i.d. uniform r x n matrices are
/// rejected until they have full rank, then the row space is returned.
FpSubspace sample_uniform_subspace(std::uint64_t p, std::size_t n, std::size_t r, Stream& rng);

/// Uniform random superspace of s with rank `r`, obtained by appending uniform
/// vectors (rejecting dependent ones). If s is uniform on Gr_{n,rank(s)} the result is
/// uniform on Gr_{n,r}.
FpSubspace extend_subspace(const FpSubspace& s, std::size_t r, Stream& rng);

/// Every basis row of s lies in t. Throws ConfigError on modulus or dimension mismatch.
bool is_subspace_of(const FpSubspace& s, const FpSubspace& t);

/// Dense integer matrix, row-major.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> entries;

  std::int64_t operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  bool operator==(const IntMatrix&) const = default;
};

/// Integer basis (as rows) of pi_p^{-1}(S): the lifted RREF rows plus p e_j for every
/// non-pivot column j, ordered by the column they lead in. |det| = p^(n-r).
IntMatrix preimage_basis(const FpSubspace& s);

/// Exact determinant by fraction-free (Bareiss) elimination.
__int128 integer_determinant(const IntMatrix& m);

}  // namespace smoothcover
