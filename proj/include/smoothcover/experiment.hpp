#pragma once

// Seeded Monte Carlo experiments. A config is a JSON object:
//
//   {"schema_version": 1, "mode": "consta" | "dd" | "nonlattice" | "radii",
//    "seed": u64, "trials": N, "caps": {"elements": u64, "budget": u64},
//    "record_timing": false, ... mode fields ...}
//
// consta:     n, p, r, body, epsilon, delta, net_p, grid, [b]
// dd:         p, n, a, ranks (ascending), tau, delta
// nonlattice: p, n, a, tau, delta, [m]
// radii:      cases: [{lattice, body}], grid   (trials = number of cases)
//
// Residue sets `a`: {"kind": "random", "size": k} | {"kind": "full"} |
// {"kind": "list", "members": [[..], ..]} |
// {"kind": "body", "body": {..}, ["lattice": {..}], ["variant": "nominal"], ["rho": 0]}.
//
// Trial t draws from Stream(seed).child(t, "trial"); its id is recorded in every row.

#include <json.hpp>
#include <optional>

#include "smoothcover/random.hpp"
#include "smoothcover/report.hpp"
#include "smoothcover/smoothness.hpp"

namespace smoothcover {

/// Builds a residue set; `rng` is used only by the random kind.
ASet a_set_from_json(std::uint64_t p, std::size_t n, const nlohmann::json& spec, const Stream& rng,
                     std::uint64_t cap = kDefaultCap);

/// Exactly `size` distinct uniform elements of [0, total).
std::vector<std::uint64_t> sample_distinct(std::uint64_t total, std::uint64_t size, const Stream& rng);

/// Runs the configured experiment; `seed` overrides the config's seed.
Report run_experiment(const nlohmann::json& config, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace smoothcover
