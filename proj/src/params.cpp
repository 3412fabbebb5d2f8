#include "smoothcover/params.hpp"

#include <cmath>
#include <limits>

#include "smoothcover/error.hpp"
#include "smoothcover/fpalg.hpp"

namespace smoothcover {

namespace {

// Trial division stays cheap below this bound.
constexpr double kPrimeSearchLimit = 0x1.0p62;

std::uint64_t prime_in_closed(double lo, double hi) {
  if (!(hi < kPrimeSearchLimit)) throw InfeasibleRange("prime range exceeds 2^62");
  const auto a = static_cast<std::uint64_t>(std::max(2.0, std::ceil(lo)));
  const auto b = static_cast<std::uint64_t>(std::floor(hi));
  if (a > b) throw InfeasibleRange("prime range contains no integer");
  try {
    return select_prime(a, b);
  } catch (const NotFound&) {
    throw InfeasibleRange("no prime in [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
}

std::uint64_t prime_in_open(double lo, double hi) {
  if (!(hi < kPrimeSearchLimit)) throw InfeasibleRange("prime range exceeds 2^62");
  const double a = std::floor(lo) + 1.0;
  const double b = std::ceil(hi) - 1.0;
  if (a > b) throw InfeasibleRange("open prime range contains no integer");
  return prime_in_closed(a, b);
}

bool in_range(const ParamSet& s) {
  const auto p = static_cast<double>(s.p);
  const bool lo = s.p_lower_open ? p > s.p_lower : p >= s.p_lower;
  const bool hi = s.p_upper_open ? p < s.p_upper : p <= s.p_upper;
  return lo && hi;
}

double gate(std::size_t n) {
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  return nn / (2.0 * std::log2(nn));
}

void require_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
}

std::uint64_t nonlattice_m(std::size_t n, double epsilon, std::uint64_t p, double ratio) {
  const long double t = 12.0L / (static_cast<long double>(epsilon) * epsilon) *
                        (static_cast<long double>(n) * std::log(static_cast<long double>(p)) + 2.0L);
  const long double per_point = (1.0L - static_cast<long double>(epsilon) / 8.0L) * ratio;
  return static_cast<std::uint64_t>(std::floor(t / per_point)) + 1;
}

}  // namespace

std::size_t rank_theorem15(std::size_t n, double b, std::uint64_t p) {
  const double nn = static_cast<double>(n);
  return 3 + static_cast<std::size_t>(std::ceil(nn / std::log(static_cast<double>(p)) * (b * std::log(nn) + std::log(3.0))));
}

std::size_t rank_cor14(std::size_t n, std::uint64_t p) {
  const double nn = static_cast<double>(n);
  return 3 + static_cast<std::size_t>(std::ceil(nn / std::log(static_cast<double>(p)) * (0.5 * std::log(9.0 * nn))));
}

std::size_t rank_cor35(std::size_t n, double rho_bar, std::uint64_t p) {
  const double nn = static_cast<double>(n);
  return 3 + static_cast<std::size_t>(std::ceil(nn * std::log(3.0 * rho_bar) / std::log(static_cast<double>(p))));
}

std::uint64_t select_prime(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || lo > hi) throw ConfigError("select_prime: need 2 <= lo <= hi");
  for (std::uint64_t k = lo;; ++k) {
    if (is_prime(k)) return k;
    if (k == hi) break;
  }
  throw NotFound("no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

std::string to_string(ParamSet::Rule rule) {
  switch (rule) {
    case ParamSet::Rule::theorem15:
      return "theorem15";
    case ParamSet::Rule::cor14_ball:
      return "cor14-ball";
    case ParamSet::Rule::cor35:
      return "cor35";
    case ParamSet::Rule::nonlattice:
      return "nonlattice";
  }
  return "unknown";
}

void ParamSet::validate() {
  checks.clear();
  const double nn = static_cast<double>(n);
  auto add = [&](std::string name, bool holds, bool hard) { checks.push_back({std::move(name), holds, hard}); };
  add("p prime", is_prime(p), true);
  add("p in range", in_range(*this), true);
  switch (rule) {
    case Rule::theorem15:
    case Rule::cor14_ball: {
      add("b <= n / (2 log2 n)", b >= 0.0 && b <= gate(n), true);
      const std::size_t expect = rule == Rule::theorem15 ? rank_theorem15(n, b, p) : rank_cor14(n, p);
      add("r formula", r == expect, true);
      add("n > 25", n > 25, false);
      if (volume) add("vol >= c3 (1/eps delta)^6 n^(3(1+2b))", *volume >= *volume_required, false);
      break;
    }
    case Rule::cor35: {
      const double rb = rho_bar.value_or(0.0);
      const double v = volume.value_or(0.0);
      add("rho_bar >= 1", rb >= 1.0, true);
      add("rho_bar < (2/delta)^(n/2)", rb < std::pow(2.0 / delta, nn / 2.0), true);
      add("vol > c5 rho_bar^6 (tau delta)^-6 n^3", v > *volume_required, true);
      add("r formula", r == rank_cor35(n, rb, p), true);
      add("r < n", r < n, false);
      add("n > 25", n > 25, false);
      break;
    }
    case Rule::nonlattice:
      add("n >= 20", n >= 20, false);
      break;
  }
  in_regime = true;
  for (const ParamCheck& c : checks) {
    if (c.holds) continue;
    in_regime = false;
    if (!c.hard) continue;
    if (c.name.starts_with("b <=")) throw GateViolated("parameter gate fails: " + c.name);
    throw HypothesisViolated("parameter hypothesis fails: " + c.name);
  }
}

ParamSet params_theorem15(std::size_t n, double b, double epsilon, double delta, std::optional<double> volume) {
  if (n < 1) throw ConfigError("n must be positive");
  require_unit_open(epsilon, "epsilon");
  require_unit_open(delta, "delta");
  if (!(b >= 0.0)) throw ConfigError("b must be nonnegative");
  if (b > gate(n)) throw GateViolated("b = " + std::to_string(b) + " exceeds n / (2 log2 n) = " + std::to_string(gate(n)));
  ParamSet s;
  s.rule = ParamSet::Rule::theorem15;
  s.n = n;
  s.b = b;
  s.epsilon = epsilon;
  s.delta = delta;
  const double nn = static_cast<double>(n);
  const double base = std::pow(nn, 1.0 + 2.0 * b) / ((epsilon * delta) * (epsilon * delta));
  s.p_lower = 1024.0 * base;
  s.p_upper = 2048.0 * base;
  s.p = prime_in_closed(s.p_lower, s.p_upper);
  s.r = rank_theorem15(n, b, s.p);
  s.volume_required = constants::c3 * std::pow(1.0 / (epsilon * delta), 6.0) * std::pow(nn, 3.0 * (1.0 + 2.0 * b));
  s.volume = volume;
  s.validate();
  return s;
}

ParamSet params_cor14_ball(std::size_t n, double epsilon, double delta, std::optional<double> volume) {
  ParamSet s = params_theorem15(n, 0.5, epsilon, delta, volume);
  s.rule = ParamSet::Rule::cor14_ball;
  s.r = rank_cor14(n, s.p);
  s.validate();
  return s;
}

ParamSet params_cor35(std::size_t n, double volume, double rho_bar, double tau, double delta) {
  if (n < 1) throw ConfigError("n must be positive");
  require_unit_open(tau, "tau");
  require_unit_open(delta, "delta");
  if (!(volume > 0.0) || !std::isfinite(volume)) throw ConfigError("volume must be positive and finite");
  const double nn = static_cast<double>(n);
  ParamSet s;
  s.rule = ParamSet::Rule::cor35;
  s.n = n;
  s.tau = tau;
  s.delta = delta;
  s.rho_bar = rho_bar;
  s.volume = volume;
  const double td = tau * delta;
  s.volume_required = constants::c5 * std::pow(rho_bar, 6.0) * std::pow(1.0 / td, 6.0) * nn * nn * nn;
  if (!(rho_bar >= 1.0)) throw HypothesisViolated("parameter hypothesis fails: rho_bar >= 1");
  if (!(rho_bar < std::pow(2.0 / delta, nn / 2.0))) {
    throw HypothesisViolated("parameter hypothesis fails: rho_bar < (2/delta)^(n/2)");
  }
  if (!(volume > *s.volume_required)) {
    throw HypothesisViolated("parameter hypothesis fails: vol > c5 rho_bar^6 (tau delta)^-6 n^3");
  }
  s.p_lower = std::max(64.0 * rho_bar * rho_bar * nn / (td * td), std::cbrt(std::pow(2.5, -nn) * volume));
  s.p_upper = std::cbrt(volume / std::exp(1.0));
  s.p_lower_open = true;
  s.p_upper_open = true;
  s.p = prime_in_open(s.p_lower, s.p_upper);
  s.r = rank_cor35(n, rho_bar, s.p);
  s.validate();
  return s;
}

ParamSet params_nonlattice(std::size_t n, double epsilon, std::optional<double> volume_ratio) {
  if (n < 1) throw ConfigError("n must be positive");
  require_unit_open(epsilon, "epsilon");
  const double nn = static_cast<double>(n);
  ParamSet s;
  s.rule = ParamSet::Rule::nonlattice;
  s.n = n;
  s.epsilon = epsilon;
  s.tau = epsilon / 2.0;
  s.delta = 2.0 * std::exp(-2.0);
  s.p_lower = 640.0 * nn / epsilon;
  s.p_upper = 1280.0 * nn / epsilon;
  s.p_lower_open = true;
  s.p_upper_open = true;
  s.p = prime_in_open(s.p_lower, s.p_upper);
  s.density_bound = 14.0 / (epsilon * epsilon) * (nn * std::log(nn) + nn * std::log(1280.0 / epsilon) + 2.0);
  if (volume_ratio) {
    if (!(*volume_ratio > 0.0)) throw ConfigError("volume ratio must be positive");
    s.volume_ratio = *volume_ratio;
    s.m = nonlattice_m(n, epsilon, s.p, *volume_ratio);
  }
  s.validate();
  return s;
}

}  // namespace smoothcover
