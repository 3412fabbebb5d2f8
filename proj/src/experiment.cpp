#include "smoothcover/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "smoothcover/error.hpp"
#include "smoothcover/io.hpp"
#include "smoothcover/params.hpp"
#include "smoothcover/stats.hpp"

namespace smoothcover {

namespace {

constexpr double kConfidence = 0.99;

struct Common {
  std::string mode;
  std::uint64_t seed;
  std::uint64_t trials;
  std::uint64_t cap;
  std::uint64_t budget;
  bool timing;
};

Common parse_common(const nlohmann::json& c, std::optional<std::uint64_t> seed) {
  if (!c.is_object()) throw ConfigError("config must be a JSON object");
  if (json_u64(c, "schema_version") != 1) throw ConfigError("config schema_version must be 1");
  if (!c.contains("mode") || !c["mode"].is_string()) throw ConfigError("config field 'mode' must be a string");
  Common out;
  out.mode = c["mode"].get<std::string>();
  out.seed = seed ? *seed : json_u64(c, "seed", 0);
  out.trials = out.mode == "radii" ? 0 : json_u64(c, "trials");
  const nlohmann::json caps = c.value("caps", nlohmann::json::object());
  out.cap = json_u64(caps, "elements", kDefaultCap);
  out.budget = json_u64(caps, "budget", default_node_budget());
  out.timing = c.value("record_timing", false);
  return out;
}

nlohmann::json fraction_summary(std::uint64_t k, std::uint64_t n) {
  nlohmann::json j;
  j["count"] = k;
  j["fraction"] = n ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
  if (n) {
    const Interval ci = clopper_pearson(k, n, kConfidence);
    j["ci_lower"] = ci.lower;
    j["ci_upper"] = ci.upper;
  }
  j["confidence"] = kConfidence;
  return j;
}

nlohmann::json quantile_summary(const std::vector<double>& v) {
  nlohmann::json j = nlohmann::json::object();
  if (v.empty()) return j;
  j["min"] = *std::min_element(v.begin(), v.end());
  j["q10"] = quantile(v, 0.1);
  j["median"] = quantile(v, 0.5);
  j["q90"] = quantile(v, 0.9);
  j["max"] = *std::max_element(v.begin(), v.end());
  return j;
}

std::vector<FpVector> decode_all(const std::vector<std::uint64_t>& idx, std::uint64_t p, std::size_t n) {
  std::vector<FpVector> out;
  out.reserve(idx.size());
  for (std::uint64_t i : idx) out.push_back(decode(i, p, n));
  return out;
}

Report run_consta(const nlohmann::json& c, const Common& common) {
  const std::size_t n = json_u64(c, "n");
  const std::uint64_t p = json_u64(c, "p");
  const std::size_t r = json_u64(c, "r");
  const ConvexBody body = body_from_json(c.at("body"));
  const double epsilon = json_double(c, "epsilon");
  const double delta = json_double(c, "delta");
  const std::uint64_t net_p = json_u64(c, "net_p");
  const double grid = json_double(c, "grid");
  const double b = json_double(c, "b", 0.0);
  if (body.dimension() != n) throw ConfigError("consta: body dimension differs from n");

  CertifyOptions options;
  options.covering.budget = common.budget;
  options.net_cap = common.cap;

  Report rep;
  rep.kind = "consta";
  rep.table.columns = {"trial", "stream_id", "certified", "lower", "upper", "rho", "fails_certain", "fails_possible"};
  const Stream root(common.seed);
  std::vector<double> uppers, lowers;
  std::uint64_t certain = 0, possible = 0, uncertified = 0;
  for (std::uint64_t t = 0; t < common.trials; ++t) {
    Stream s = root.child(t, "trial");
    const ConstructionA ca = construction_a(p, r, n, s);
    nlohmann::json row{{"trial", t}, {"stream_id", s.id()}};
    try {
      const SmoothnessInterval iv = eta_certified(ca.lattice, body, net_p, grid, options);
      const bool fc = iv.lower >= epsilon;
      const bool fp = iv.upper >= epsilon;
      certain += fc;
      possible += fp;
      lowers.push_back(iv.lower);
      uppers.push_back(iv.upper);
      row.update({{"certified", true}, {"lower", iv.lower}, {"upper", iv.upper}, {"rho", iv.rho},
                  {"fails_certain", fc}, {"fails_possible", fp}});
    } catch (const NoCoveringCertificate&) {
      ++possible;
      ++uncertified;
      row.update({{"certified", false}, {"lower", nullptr}, {"upper", nullptr}, {"rho", nullptr},
                  {"fails_certain", false}, {"fails_possible", true}});
    }
    rep.table.add(std::move(row));
  }
  bool in_regime = false;
  try {
    const ParamSet ps = params_theorem15(n, b, epsilon, delta, body.exact_volume());
    in_regime = ps.in_regime && ps.p == p && ps.r == r;
  } catch (const Error&) {
    in_regime = false;
  }
  rep.summary["trials"] = common.trials;
  rep.summary["uncertified"] = uncertified;
  rep.summary["failures_certain"] = fraction_summary(certain, common.trials);
  rep.summary["failures_possible"] = fraction_summary(possible, common.trials);
  rep.summary["eta_lower"] = quantile_summary(lowers);
  rep.summary["eta_upper"] = quantile_summary(uppers);
  rep.summary["bound"] = {{"name", "Pr(eta >= epsilon) < delta"}, {"value", delta}, {"in_regime", in_regime}};
  return rep;
}

Report run_dd(const nlohmann::json& c, const Common& common) {
  const std::uint64_t p = json_u64(c, "p");
  const std::size_t n = json_u64(c, "n");
  const double tau = json_double(c, "tau");
  const double delta = json_double(c, "delta");
  std::vector<std::size_t> ranks;
  if (!c.contains("ranks") || !c["ranks"].is_array() || c["ranks"].empty()) {
    throw ConfigError("dd: 'ranks' must be a nonempty array");
  }
  for (const auto& e : c["ranks"]) {
    if (!e.is_number_unsigned() && !e.is_number_integer()) throw ConfigError("dd: ranks must be integers");
    ranks.push_back(e.get<std::size_t>());
  }
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1 || ranks[i] > n || (i && ranks[i] <= ranks[i - 1])) {
      throw ConfigError("dd: ranks must be strictly increasing within [1, n]");
    }
  }
  const Stream root(common.seed);
  const ASet a = a_set_from_json(p, n, c.at("a"), root.child(0, "a-set"), common.cap);
  if (a.size() == 0) throw EmptyInput("dd: A is empty");

  Report rep;
  rep.kind = "dd";
  rep.table.columns = {"trial", "stream_id", "r", "eta", "fails"};
  std::vector<std::vector<double>> per_rank(ranks.size());
  std::vector<std::uint64_t> fails(ranks.size(), 0);
  std::uint64_t nesting_violations = 0;
  for (std::uint64_t t = 0; t < common.trials; ++t) {
    Stream s = root.child(t, "trial");
    FpSubspace sub = sample_uniform_subspace(p, n, ranks[0], s);
    double previous = 0.0;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      if (k) sub = extend_subspace(sub, ranks[k], s);
      const double eta = eta_fp_exact(a, sub);
      if (k && eta > previous + 1e-12) ++nesting_violations;
      previous = eta;
      per_rank[k].push_back(eta);
      const bool f = eta > tau;
      fails[k] += f;
      rep.table.add({{"trial", t}, {"stream_id", s.id()}, {"r", ranks[k]}, {"eta", eta}, {"fails", f}});
    }
  }
  nlohmann::json by_rank = nlohmann::json::array();
  bool medians_nonincreasing = true;
  double last_median = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    nlohmann::json j;
    j["r"] = ranks[k];
    j["eta"] = quantile_summary(per_rank[k]);
    j["failures"] = fraction_summary(fails[k], common.trials);
    if (!per_rank[k].empty()) {
      const double med = quantile(per_rank[k], 0.5);
      if (med > last_median + 1e-12) medians_nonincreasing = false;
      last_median = med;
    }
    by_rank.push_back(std::move(j));
  }
  rep.summary["trials"] = common.trials;
  rep.summary["a_size"] = a.size();
  rep.summary["by_rank"] = std::move(by_rank);
  rep.summary["nesting_violations"] = nesting_violations;
  rep.summary["median_nonincreasing_in_r"] = medians_nonincreasing;
  rep.summary["bound"] = {{"name", "Pr(eta_Fp > tau) < delta"}, {"value", delta}, {"in_regime", false}};
  return rep;
}

Report run_nonlattice(const nlohmann::json& c, const Common& common) {
  const std::uint64_t p = json_u64(c, "p");
  const std::size_t n = json_u64(c, "n");
  const double tau = json_double(c, "tau");
  const double delta = json_double(c, "delta");
  const Stream root(common.seed);
  const ASet a = a_set_from_json(p, n, c.at("a"), root.child(0, "a-set"), common.cap);
  if (a.size() == 0) throw EmptyInput("nonlattice: A is empty");
  const std::uint64_t m = c.contains("m") ? json_u64(c, "m") : lemma51_threshold(p, n, tau, delta, a.size());
  const long double space = static_cast<long double>(a.space_size());

  Report rep;
  rep.kind = "nonlattice";
  rep.table.columns = {"trial", "stream_id", "distinct", "set_size", "eta", "eta_draws", "fails", "fails_draws"};
  std::uint64_t failures = 0, failures_draws = 0, collisions = 0;
  std::vector<double> etas;
  for (std::uint64_t t = 0; t < common.trials; ++t) {
    const Stream s = root.child(t, "trial");
    const RandomPointSet set = random_point_set(p, n, m, s);
    const double eta = eta_fp_exact(a, decode_all(set.members, p, n), common.cap);
    const double eta_draws = eta_fp_multiset(a, decode_all(set.draws, p, n), common.cap);
    const bool f = !set.distinct || eta >= tau;
    const bool fd = eta_draws >= tau;
    failures += f;
    failures_draws += fd;
    collisions += !set.distinct;
    etas.push_back(eta);
    rep.table.add({{"trial", t}, {"stream_id", s.id()}, {"distinct", set.distinct}, {"set_size", set.members.size()},
                   {"eta", eta}, {"eta_draws", eta_draws}, {"fails", f}, {"fails_draws", fd}});
  }
  const double collision_bound = static_cast<double>(static_cast<long double>(m) * m / space);
  long double birthday = 1.0L;
  for (std::uint64_t i = 1; i < m; ++i) birthday *= 1.0L - static_cast<long double>(i) / space;
  const double mu = static_cast<double>(static_cast<long double>(m) * a.size() / space);

  rep.summary["trials"] = common.trials;
  rep.summary["m"] = m;
  rep.summary["a_size"] = a.size();
  rep.summary["mu"] = mu;
  rep.summary["chernoff_rhs"] = chernoff_rhs(std::min(tau, 1.0), mu);
  rep.summary["collision_bound"] = collision_bound;
  rep.summary["collision_probability"] = static_cast<double>(1.0L - birthday);
  rep.summary["collisions"] = fraction_summary(collisions, common.trials);
  rep.summary["failures"] = fraction_summary(failures, common.trials);
  rep.summary["failures_draws"] = fraction_summary(failures_draws, common.trials);
  rep.summary["eta"] = quantile_summary(etas);
  const double bound = delta + collision_bound;
  rep.summary["bound"] = {{"name", "Pr(eta_Fp >= tau or |S| != m) <= delta + m^2 p^-n"},
                          {"value", bound},
                          {"vacuous", bound >= 1.0},
                          {"in_regime", true}};
  rep.summary["bound_draws"] = {{"name", "Pr(eta_Fp over draws >= tau) <= delta"}, {"value", delta}, {"in_regime", true}};
  return rep;
}

Report run_radii(const nlohmann::json& c, const Common& common) {
  const double grid = json_double(c, "grid");
  if (!c.contains("cases") || !c["cases"].is_array()) throw ConfigError("radii: 'cases' must be an array");
  CoveringOptions options;
  options.budget = common.budget;
  const Stream root(common.seed);
  Report rep;
  rep.kind = "radii";
  rep.table.columns = {"trial", "stream_id", "n", "packing", "covering_upper", "covering_estimate", "rho_upper",
                       "points_per_axis"};
  std::uint64_t t = 0;
  for (const auto& cs : c["cases"]) {
    const Lattice lattice = lattice_from_json(cs.at("lattice"));
    const ConvexBody body = body_from_json(cs.at("body"));
    const double pack = packing_radius(lattice, body, options.budget);
    const CoveringBound cov = covering_radius_upper(lattice, body, grid, options);
    rep.table.add({{"trial", t},
                   {"stream_id", root.child(t, "trial").id()},
                   {"n", lattice.dimension()},
                   {"packing", pack},
                   {"covering_upper", cov.upper},
                   {"covering_estimate", cov.grid_estimate},
                   {"rho_upper", cov.upper / pack},
                   {"points_per_axis", cov.points_per_axis}});
    ++t;
  }
  rep.summary["trials"] = t;
  return rep;
}

}  // namespace

std::vector<std::uint64_t> sample_distinct(std::uint64_t total, std::uint64_t size, const Stream& rng) {
  if (size > total) throw ConfigError("cannot draw more distinct elements than exist");
  std::vector<std::uint64_t> out;
  out.reserve(size);
  std::set<std::uint64_t> seen;
  Stream s = rng;
  if (size * 2 > total) {
    // Dense: partial Fisher-Yates over the whole range.
    std::vector<std::uint64_t> all(total);
    for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < size; ++i) std::swap(all[i], all[i + s.uniform_below(total - i)]);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size));
    return out;
  }
  while (out.size() < size) {
    const std::uint64_t v = s.uniform_below(total);
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

ASet a_set_from_json(std::uint64_t p, std::size_t n, const nlohmann::json& spec, const Stream& rng,
                     std::uint64_t cap) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    throw ConfigError("residue set needs a string field 'kind'");
  }
  const std::string kind = spec["kind"].get<std::string>();
  const std::uint64_t total = checked_pow(p, n, cap);
  if (kind == "random") return ASet(p, n, sample_distinct(total, json_u64(spec, "size"), rng), ASet::Variant::nominal, 0.0, cap);
  if (kind == "full") {
    std::vector<std::uint64_t> all(total);
    for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
    return ASet(p, n, std::move(all), ASet::Variant::nominal, 0.0, cap);
  }
  if (kind == "list") {
    std::vector<std::uint64_t> idx;
    for (const auto& v : spec.at("members")) {
      FpVector r;
      for (const auto& e : v) r.push_back(e.get<Residue>());
      if (r.size() != n) throw ConfigError("residue list entry has wrong length");
      for (Residue e : r) {
        if (e >= p) throw ConfigError("residue list entry not reduced mod p");
      }
      idx.push_back(encode(r, p));
    }
    return ASet(p, n, std::move(idx), ASet::Variant::nominal, 0.0, cap);
  }
  if (kind == "body") {
    const ConvexBody body = body_from_json(spec.at("body"));
    const Lattice lattice = spec.contains("lattice") ? lattice_from_json(spec["lattice"]) : Lattice::integer(n);
    if (lattice.dimension() != n || body.dimension() != n) throw ConfigError("residue set body has wrong dimension");
    const std::string v = spec.value("variant", std::string("nominal"));
    ASet::Variant variant = ASet::Variant::nominal;
    if (v == "deflated") {
      variant = ASet::Variant::deflated;
    } else if (v == "inflated") {
      variant = ASet::Variant::inflated;
    } else if (v != "nominal") {
      throw ConfigError("unknown residue set variant '" + v + "'");
    }
    return build_a_set(lattice, body, p, variant, json_double(spec, "rho", 0.0), cap);
  }
  throw ConfigError("unknown residue set kind '" + kind + "'");
}

Report run_experiment(const nlohmann::json& config, std::optional<std::uint64_t> seed) {
  const Common common = parse_common(config, seed);
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  if (common.mode == "consta") {
    rep = run_consta(config, common);
  } else if (common.mode == "dd") {
    rep = run_dd(config, common);
  } else if (common.mode == "nonlattice") {
    rep = run_nonlattice(config, common);
  } else if (common.mode == "radii") {
    rep = run_radii(config, common);
  } else {
    throw ConfigError("unknown experiment mode '" + common.mode + "'");
  }
  rep.config = config;
  rep.config["seed"] = common.seed;
  if (common.timing) {
    rep.summary["runtime_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rep;
}

}  // namespace smoothcover
