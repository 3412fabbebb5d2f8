#pragma once

// Data-parallel inner loops. Every kernel has a serial reference implementation and an
// OpenMP implementation producing identical results; the dispatching overloads pick one.

#include <cstdint>
#include <span>
#include <vector>

#include "smoothcover/fpalg.hpp"
#include "smoothcover/geometry.hpp"
#include "smoothcover/lattice.hpp"

namespace smoothcover::kernels {

/// max over the grid {g (i/N) : i in {0..N-1}^n} of min over `candidates` l of the
/// centred gauge of x - l.
double covering_grid_max_serial(const Lattice& lattice, const ConvexBody& body, std::size_t points_per_axis,
                                std::span<const Point> candidates);
double covering_grid_max_parallel(const Lattice& lattice, const ConvexBody& body, std::size_t points_per_axis,
                                  std::span<const Point> candidates);

/// N(L, K, x) for every x in `shifts`, in order.
std::vector<std::uint64_t> count_at_serial(const Lattice& lattice, const ConvexBody& body,
                                           std::span<const Point> shifts, std::uint64_t budget);
std::vector<std::uint64_t> count_at_parallel(const Lattice& lattice, const ConvexBody& body,
                                             std::span<const Point> shifts, std::uint64_t budget);
std::vector<std::uint64_t> count_at(const Lattice& lattice, const ConvexBody& body, std::span<const Point> shifts,
                                    std::uint64_t budget, bool parallel);

/// |(x + S) ∩ A| for every shift x in F_p^n (indexed by encode), by direct summation
/// over S. `indicator` has p^n entries.
std::vector<std::uint32_t> shift_counts_serial(std::span<const std::uint8_t> indicator, std::uint64_t p,
                                               std::size_t n, std::span<const FpVector> s);
std::vector<std::uint32_t> shift_counts_parallel(std::span<const std::uint8_t> indicator, std::uint64_t p,
                                                 std::size_t n, std::span<const FpVector> s);
std::vector<std::uint32_t> shift_counts(std::span<const std::uint8_t> indicator, std::uint64_t p, std::size_t n,
                                        std::span<const FpVector> s, bool parallel);

/// Sets the OpenMP team size for subsequent parallel kernels (no-op without OpenMP).
void set_threads(int threads);
int max_threads();

}  // namespace smoothcover::kernels
