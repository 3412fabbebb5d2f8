// Command-line front end. Exit codes: 0 success, 1 other failure, 2 configuration
// error, 3 cap or budget exceeded, 4 certification unavailable.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "smoothcover/error.hpp"
#include "smoothcover/experiment.hpp"
#include "smoothcover/io.hpp"
#include "smoothcover/kernels.hpp"
#include "smoothcover/params.hpp"
#include "smoothcover/report.hpp"
#include "smoothcover/smoothness.hpp"

namespace sc = smoothcover;
using nlohmann::json;

namespace {

struct Globals {
  std::string out = "-";
  std::string format;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

sc::Format format_or(const Globals& g, sc::Format fallback) {
  return g.format.empty() ? fallback : sc::parse_format(g.format);
}

// One flat record: JSON as an object, CSV as a header plus a single row.
void write_record(const Globals& g, const std::vector<std::string>& columns, const json& record) {
  if (format_or(g, sc::Format::json) == sc::Format::json) {
    sc::write_text(g.out, sc::json_text(record));
    return;
  }
  sc::Table t;
  t.columns = columns;
  json row;
  for (const std::string& c : columns) row[c] = record.contains(c) ? record[c] : json(nullptr);
  t.add(std::move(row));
  sc::write_text(g.out, sc::csv_text(t));
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json params_json(const sc::ParamSet& s) {
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"holds", c.holds}, {"hard", c.hard}});
  return {{"rule", sc::to_string(s.rule)},
          {"n", s.n},
          {"b", s.b},
          {"epsilon", s.epsilon},
          {"delta", s.delta},
          {"tau", s.tau},
          {"p", s.p},
          {"r", s.r},
          {"p_lower", s.p_lower},
          {"p_upper", s.p_upper},
          {"p_lower_open", s.p_lower_open},
          {"p_upper_open", s.p_upper_open},
          {"volume_required", opt(s.volume_required)},
          {"volume", opt(s.volume)},
          {"volume_ratio", opt(s.volume_ratio)},
          {"rho_bar", opt(s.rho_bar)},
          {"m", opt(s.m)},
          {"density_bound", opt(s.density_bound)},
          {"in_regime", s.in_regime},
          {"checks", checks},
          {"constants",
           {{"c1", sc::constants::c1},
            {"c2", sc::constants::c2},
            {"c3", sc::constants::c3},
            {"c4", sc::constants::c4},
            {"c5", sc::constants::c5}}}};
}

sc::CertifyOptions::Method parse_method(const std::string& m) {
  if (m == "auto") return sc::CertifyOptions::Method::automatic;
  if (m == "net") return sc::CertifyOptions::Method::net;
  if (m == "separable") return sc::CertifyOptions::Method::separable;
  throw sc::ConfigError("unknown method '" + m + "' (expected auto, net or separable)");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const sc::CapExceeded*>(&e) || dynamic_cast<const sc::EnumerationBudgetExceeded*>(&e)) return 3;
  if (dynamic_cast<const sc::NoCoveringCertificate*>(&e) || dynamic_cast<const sc::Unsupported*>(&e)) return 4;
  if (dynamic_cast<const sc::ConfigError*>(&e) || dynamic_cast<const sc::HypothesisViolated*>(&e) ||
      dynamic_cast<const sc::InfeasibleRange*>(&e) || dynamic_cast<const sc::NotFound*>(&e) ||
      dynamic_cast<const sc::NotAPacking*>(&e) || dynamic_cast<const sc::ResidueCollision*>(&e) ||
      dynamic_cast<const json::exception*>(&e)) {
    return 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified smoothness of lattice coverings and seeded experiments."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Output path, '-' for standard output")->capture_default_str();
  app.add_option("--format", g.format, "csv or json (default json; csv for phi-check)");
  app.add_option("--seed", g.seed, "64-bit seed; overrides the config seed");
  app.add_option("--threads", g.threads, "OpenMP threads for parallel kernels (speed only)");

  // radii
  auto* radii = app.add_subcommand("radii", "Packing radius, certified covering radius upper bound and their ratio");
  std::string lattice_arg, body_arg;
  double grid = 1.0 / 64.0;
  radii->add_option("--lattice", lattice_arg, "Lattice JSON (file or inline)")->required();
  radii->add_option("--body", body_arg, "Body JSON (file or inline)")->required();
  radii->add_option("--grid", grid, "Coefficient grid resolution h in (0, 1]")->capture_default_str();
  radii->footer("CSV columns: packing,covering_upper,covering_estimate,rho_upper,points_per_axis,slack");

  // eta
  auto* eta = app.add_subcommand("eta", "Certified interval for the covering smoothness eta(K, L)");
  std::uint64_t net_p = 11;
  std::string method = "auto";
  eta->add_option("--lattice", lattice_arg, "Lattice JSON (file or inline)")->required();
  eta->add_option("--body", body_arg, "Body JSON (file or inline)")->required();
  eta->add_option("--net-p", net_p, "Prime net parameter")->capture_default_str();
  eta->add_option("--grid", grid, "Covering grid resolution h")->capture_default_str();
  eta->add_option("--method", method, "auto, net or separable")->capture_default_str();
  eta->footer("CSV columns: lower,upper,rho,net_p,ratio_min,ratio_max,expected,method");

  // eta-fp
  auto* etafp = app.add_subcommand("eta-fp", "Discrete smoothness of A against a subspace or random set");
  std::uint64_t p = 0, n = 0;
  std::string a_spec;
  std::optional<std::uint64_t> subspace_seed, set_seed, samples;
  std::uint64_t rank = 1, m = 1;
  bool exact = false;
  etafp->add_option("--p", p, "Prime modulus")->required();
  etafp->add_option("--n", n, "Dimension")->required();
  etafp->add_option("--a-spec", a_spec, "Residue set JSON (file or inline)")->required();
  auto* o_sub = etafp->add_option("--subspace-seed", subspace_seed, "Seed for a uniform subspace of rank --r");
  auto* o_set = etafp->add_option("--set-seed", set_seed, "Seed for --m i.i.d. uniform points");
  o_sub->excludes(o_set);
  etafp->add_option("--r", rank, "Subspace rank")->capture_default_str();
  etafp->add_option("--m", m, "Number of random points")->capture_default_str();
  auto* o_exact = etafp->add_flag("--exact", exact, "Evaluate every shift");
  auto* o_samples = etafp->add_option("--samples", samples, "Evaluate this many random shifts");
  o_exact->excludes(o_samples);
  etafp->footer("CSV columns: eta,exact,method,p,n,a_size,s_size,distinct");

  // phi-check
  auto* phi = app.add_subcommand("phi-check", "Certify eta(alpha K, L) < epsilon for all alpha >= 1 over a dilate net");
  double epsilon = 0.5;
  phi->add_option("--lattice", lattice_arg, "Lattice JSON (file or inline)")->required();
  phi->add_option("--body", body_arg, "Body JSON (file or inline)")->required();
  phi->add_option("--epsilon", epsilon, "Target smoothness")->required();
  phi->add_option("--net-p", net_p, "Prime net parameter")->capture_default_str();
  phi->add_option("--grid", grid, "Covering grid resolution h")->capture_default_str();
  phi->add_option("--method", method, "auto, net or separable")->capture_default_str();
  phi->footer("CSV columns: i,alpha,eta_upper,pass");

  // params
  auto* params = app.add_subcommand("params", "Prime and rank selection rules");
  std::string rule;
  std::size_t pn = 0;
  double b = 0.0, delta = 0.5, tau = 0.5;
  std::optional<double> volume, rho_bar, volume_ratio;
  params->add_option("--rule", rule, "theorem15, cor14-ball, cor35 or nonlattice")->required();
  params->add_option("--n", pn, "Dimension")->required();
  params->add_option("--b", b, "Exponent b (theorem15)");
  params->add_option("--epsilon", epsilon, "epsilon");
  params->add_option("--delta", delta, "delta");
  params->add_option("--tau", tau, "tau (cor35)");
  params->add_option("--volume", volume, "vol(K)");
  params->add_option("--rho-bar", rho_bar, "Upper bound on rho_K(L) (cor35)");
  params->add_option("--volume-ratio", volume_ratio, "vol(K) / covol(L) (nonlattice)");
  params->footer("CSV columns: rule,n,b,epsilon,delta,tau,p,r,p_lower,p_upper,m,density_bound,in_regime");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a seeded experiment from a JSON config");
  std::string config_arg;
  exp->add_option("--config", config_arg, "Experiment config JSON (file or inline)")->required();
  exp->footer(
      "CSV columns by mode:\n"
      "  consta:     trial,stream_id,certified,lower,upper,rho,fails_certain,fails_possible\n"
      "  dd:         trial,stream_id,r,eta,fails\n"
      "  nonlattice: trial,stream_id,distinct,set_size,eta,eta_draws,fails,fails_draws\n"
      "  radii:      trial,stream_id,n,packing,covering_upper,covering_estimate,rho_upper,points_per_axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g.threads > 0) sc::kernels::set_threads(g.threads);
    if (*radii) {
      const sc::Lattice L = sc::lattice_from_json(sc::load_json_arg(lattice_arg));
      const sc::ConvexBody K = sc::body_from_json(sc::load_json_arg(body_arg));
      const double pack = sc::packing_radius(L, K);
      const sc::CoveringBound cov = sc::covering_radius_upper(L, K, grid);
      write_record(g, {"packing", "covering_upper", "covering_estimate", "rho_upper", "points_per_axis", "slack"},
                   {{"packing", pack},
                    {"covering_upper", cov.upper},
                    {"covering_estimate", cov.grid_estimate},
                    {"rho_upper", cov.upper / pack},
                    {"points_per_axis", cov.points_per_axis},
                    {"slack", cov.slack}});
    } else if (*eta) {
      const sc::Lattice L = sc::lattice_from_json(sc::load_json_arg(lattice_arg));
      const sc::ConvexBody K = sc::body_from_json(sc::load_json_arg(body_arg));
      sc::CertifyOptions o;
      o.method = parse_method(method);
      const sc::SmoothnessInterval iv = sc::eta_certified(L, K, net_p, grid, o);
      write_record(g, {"lower", "upper", "rho", "net_p", "ratio_min", "ratio_max", "expected", "method"},
                   {{"lower", iv.lower},
                    {"upper", iv.upper},
                    {"rho", iv.rho},
                    {"net_p", iv.net_p},
                    {"ratio_min", iv.ratio_min},
                    {"ratio_max", iv.ratio_max},
                    {"expected", iv.expected},
                    {"method", sc::to_string(iv.method)}});
    } else if (*etafp) {
      if (!subspace_seed && !set_seed) throw sc::ConfigError("eta-fp needs --subspace-seed or --set-seed");
      if (!exact && !samples) exact = true;
      const sc::Stream a_rng(g.seed.value_or(0), sc::tag_hash("a-set"));
      const sc::ASet a = sc::a_set_from_json(p, n, sc::load_json_arg(a_spec), a_rng);
      json rec{{"p", p}, {"n", n}, {"a_size", a.size()}, {"exact", exact}};
      if (subspace_seed) {
        sc::Stream s(*subspace_seed, sc::tag_hash("subspace"));
        const sc::FpSubspace sub = sc::sample_uniform_subspace(p, n, rank, s);
        rec["s_size"] = sc::checked_pow(p, rank, sc::kDefaultCap);
        rec["distinct"] = true;
        if (exact) {
          rec["eta"] = sc::eta_fp_exact(a, sub);
          rec["method"] = "coset";
        } else {
          const auto members = sub.enumerate(sc::kDefaultCap);
          rec["eta"] = sc::eta_fp_sampled(a, members, *samples, sc::Stream(*subspace_seed, sc::tag_hash("shift")));
          rec["method"] = "sampled";
        }
      } else {
        const sc::RandomPointSet set = sc::random_point_set(p, n, m, sc::Stream(*set_seed, sc::tag_hash("points")));
        std::vector<sc::FpVector> pts;
        for (std::uint64_t i : set.members) pts.push_back(sc::decode(i, p, n));
        rec["s_size"] = pts.size();
        rec["distinct"] = set.distinct;
        if (exact) {
          rec["eta"] = sc::eta_fp_exact(a, pts);
          rec["method"] = "brute";
        } else {
          rec["eta"] = sc::eta_fp_sampled(a, pts, *samples, sc::Stream(*set_seed, sc::tag_hash("shift")));
          rec["method"] = "sampled";
        }
      }
      write_record(g, {"eta", "exact", "method", "p", "n", "a_size", "s_size", "distinct"}, rec);
    } else if (*phi) {
      const sc::Lattice L = sc::lattice_from_json(sc::load_json_arg(lattice_arg));
      const sc::ConvexBody K = sc::body_from_json(sc::load_json_arg(body_arg));
      sc::CertifyOptions o;
      o.method = parse_method(method);
      const sc::DilateReport rep = sc::verify_smooth_all_dilates(L, K, epsilon, net_p, grid, o);
      sc::Table t;
      t.columns = {"i", "alpha", "eta_upper", "pass"};
      for (const auto& r : rep.rows) t.add({{"i", r.index}, {"alpha", r.alpha}, {"eta_upper", r.eta_upper}, {"pass", r.pass}});
      if (format_or(g, sc::Format::csv) == sc::Format::csv) {
        sc::write_text(g.out, sc::csv_text(t));
      } else {
        sc::write_text(g.out, sc::json_text({{"certified", rep.certified},
                                             {"beta", rep.beta},
                                             {"last_index", rep.last_index},
                                             {"failing_index", opt(rep.failing_index)},
                                             {"rows", t.rows}}));
      }
    } else if (*params) {
      sc::ParamSet s;
      if (rule == "theorem15") {
        s = sc::params_theorem15(pn, b, epsilon, delta, volume);
      } else if (rule == "cor14-ball") {
        s = sc::params_cor14_ball(pn, epsilon, delta, volume);
      } else if (rule == "cor35") {
        if (!volume || !rho_bar) throw sc::ConfigError("cor35 needs --volume and --rho-bar");
        s = sc::params_cor35(pn, *volume, *rho_bar, tau, delta);
      } else if (rule == "nonlattice") {
        s = sc::params_nonlattice(pn, epsilon, volume_ratio);
      } else {
        throw sc::ConfigError("unknown rule '" + rule + "'");
      }
      write_record(g, {"rule", "n", "b", "epsilon", "delta", "tau", "p", "r", "p_lower", "p_upper", "m",
                       "density_bound", "in_regime"},
                   params_json(s));
    } else if (*exp) {
      const sc::Report rep = sc::run_experiment(sc::load_json_arg(config_arg), g.seed);
      sc::emit_report(rep, format_or(g, sc::Format::json), g.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "smoothcover: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
