#pragma once

// Parameter selection rules for the construction A and non-lattice ensembles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smoothcover {

namespace constants {
inline const double c1 = 0x1.0p66;
inline const double c2 = 0x1.0p112;
inline const double c3 = 2.718281828459045 * 0x1.0p33;
inline const double c4 = 2.718281828459045 * 0x1.0p57;
inline const double c5 = 2.718281828459045 * 128.0 * 128.0 * 128.0;
}  // namespace constants

/// Smallest prime in [lo, hi]; NotFound if there is none.
std::uint64_t select_prime(std::uint64_t lo, std::uint64_t hi);

/// Rank formulas at a given prime.
std::size_t rank_theorem15(std::size_t n, double b, std::uint64_t p);
std::size_t rank_cor14(std::size_t n, std::uint64_t p);
std::size_t rank_cor35(std::size_t n, double rho_bar, std::uint64_t p);

struct ParamCheck {
  std::string name;
  bool holds;
  /// A failing hard check makes the parameter set invalid.
  bool hard;
};

struct ParamSet {
  enum class Rule { theorem15, cor14_ball, cor35, nonlattice };

  Rule rule = Rule::theorem15;
  std::size_t n = 0;
  double b = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  std::uint64_t p = 0;
  /// Rank for the construction A rules, 0 for the non-lattice rule.
  std::size_t r = 0;
  double p_lower = 0.0;
  double p_upper = 0.0;
  bool p_lower_open = false;
  bool p_upper_open = false;
  /// Volume rules: the threshold the body must meet, and the body volume when known.
  std::optional<double> volume_required;
  std::optional<double> volume;
  std::optional<double> rho_bar;
  /// Non-lattice rule: vol(K) / covol(L), point count and density bound.
  std::optional<double> volume_ratio;
  std::optional<std::uint64_t> m;
  std::optional<double> density_bound;
  std::vector<ParamCheck> checks;
  /// Every check holds, including the asymptotic regime (n > 25, or n >= 20 off-lattice).
  bool in_regime = false;

  /// Re-evaluates the checks from the stored fields; throws on a failing hard check.
  void validate();
};

std::string to_string(ParamSet::Rule rule);

/// p in [1024 n^(1+2b) / (eps delta)^2, 2048 n^(1+2b) / (eps delta)^2], r = 3 +
/// ceil(n (b ln n + ln 3) / ln p). Gate: b <= n / (2 log2 n).
ParamSet params_theorem15(std::size_t n, double b, double epsilon, double delta,
                          std::optional<double> volume = std::nullopt);

/// The ball specialization: b = 1/2 with r = 3 + ceil(n (ln 9n) / (2 ln p)).
ParamSet params_cor14_ball(std::size_t n, double epsilon, double delta, std::optional<double> volume = std::nullopt);

/// Requires 1 <= rho_bar < (2/delta)^(n/2) and vol > c5 rho_bar^6 (tau delta)^-6 n^3.
/// p is the smallest prime strictly inside (max{64 rho_bar^2 n / (tau delta)^2,
/// (2.5^-n vol)^(1/3)}, (vol/e)^(1/3)), r = 3 + ceil(n ln(3 rho_bar) / ln p).
ParamSet params_cor35(std::size_t n, double volume, double rho_bar, double tau, double delta);

/// tau = eps/2, delta = 2e^-2, p the smallest prime in (640 n / eps, 1280 n / eps).
/// With `volume_ratio` = vol(K) / covol(L), m is the least integer with
/// (1 - eps/8) m volume_ratio > 12/eps^2 (n ln p + 2).
ParamSet params_nonlattice(std::size_t n, double epsilon, std::optional<double> volume_ratio = std::nullopt);

}  // namespace smoothcover
