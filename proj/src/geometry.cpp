#include "smoothcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smoothcover/error.hpp"

namespace smoothcover {

namespace {

constexpr double kGaugeRelTol = 1e-12;
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

double quad_form(const Eigen::MatrixXd& a, std::span<const double> x) {
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return v.dot(a * v);
}

double bilinear(const Eigen::MatrixXd& a, std::span<const double> x, std::span<const double> y) {
  const Eigen::Map<const Eigen::VectorXd> u(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
  return u.dot(a * v);
}

// Smallest s with Q(x - s c) <= s^2 for a quadratic form Q with Q(c) < 1.
double quadric_gauge(std::span<const double> c, double qx, double qc, double bxc) {
  const bool centered = std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
  if (centered) return std::sqrt(qx);
  const double a = 1.0 - qc;
  return (-bxc + std::sqrt(bxc * bxc + a * qx)) / a;
}

// Gauge of a box containing 0 in its interior.
double box_gauge(std::span<const double> x, std::span<const double> lo, std::span<const double> hi) {
  double g = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0) g = std::max(g, x[i] / hi[i]);
    else if (x[i] < 0) g = std::max(g, x[i] / lo[i]);
  }
  return g;
}

void check_finite(std::span<const double> v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) throw ConfigError(std::string(what) + ": non-finite coordinate");
  }
}

}  // namespace

double unit_ball_volume(std::size_t n) {
  const double half = static_cast<double>(n) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

ConvexBody ConvexBody::box(Point lower, Point upper) {
  const std::size_t n = lower.size();
  return box(std::move(lower), std::move(upper), std::vector<bool>(n, true), std::vector<bool>(n, true));
}

ConvexBody ConvexBody::box(Point lower, Point upper, std::vector<bool> lower_closed, std::vector<bool> upper_closed) {
  const std::size_t n = lower.size();
  if (n == 0 || upper.size() != n || lower_closed.size() != n || upper_closed.size() != n) {
    throw ConfigError("box: bound and closedness vectors must share a positive length");
  }
  check_finite(lower, "box");
  check_finite(upper, "box");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] < upper[i])) throw ConfigError("box: lower must be < upper in every coordinate");
  }
  return ConvexBody(BoxShape{std::move(lower), std::move(upper), std::move(lower_closed), std::move(upper_closed)}, n,
                    1.0);
}

ConvexBody ConvexBody::half_open_box(Point lower, Point upper) {
  const std::size_t n = lower.size();
  return box(std::move(lower), std::move(upper), std::vector<bool>(n, true), std::vector<bool>(n, false));
}

ConvexBody ConvexBody::ball(Point center, double radius) {
  if (center.empty()) throw ConfigError("ball: empty centre");
  check_finite(center, "ball");
  if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("ball: radius must be positive");
  const std::size_t n = center.size();
  return ConvexBody(BallShape{std::move(center), radius}, n, 1.0);
}

ConvexBody ConvexBody::ellipsoid(Point center, const Eigen::MatrixXd& form) {
  const auto n = static_cast<Eigen::Index>(center.size());
  if (n == 0 || form.rows() != n || form.cols() != n) throw ConfigError("ellipsoid: matrix shape mismatch");
  check_finite(center, "ellipsoid");
  if (!form.allFinite() || (form - form.transpose()).cwiseAbs().maxCoeff() > 1e-12 * form.cwiseAbs().maxCoeff()) {
    throw ConfigError("ellipsoid: matrix must be symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (form + form.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) throw ConfigError("ellipsoid: matrix is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  double det = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) det *= l(i, i) * l(i, i);
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return ConvexBody(EllipsoidShape{std::move(center), sym, std::move(inv), det}, static_cast<std::size_t>(n), 1.0);
}

ConvexBody ConvexBody::oracle(std::function<bool(std::span<const double>)> predicate, AxisBox bounds, bool symmetric,
                              std::optional<double> declared_volume, std::optional<Point> center) {
  const std::size_t n = bounds.lower.size();
  if (n == 0 || bounds.upper.size() != n) throw ConfigError("oracle: bounding box shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(bounds.lower[i] < bounds.upper[i])) throw ConfigError("oracle: degenerate bounding box");
  }
  if (declared_volume && !(*declared_volume > 0)) throw ConfigError("oracle: declared volume must be positive");
  Point c(n);
  if (center) {
    if (center->size() != n) throw ConfigError("oracle: centre dimension mismatch");
    c = *center;
  } else {
    for (std::size_t i = 0; i < n; ++i) c[i] = 0.5 * (bounds.lower[i] + bounds.upper[i]);
  }
  // Sample a box twice the declared size; any accepted point outside the bounds
  // falsifies the declaration.
  Stream rng(0x5eed0ac1eULL, n);
  Point y(n);
  for (int s = 0; s < 4096; ++s) {
    bool outside = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double mid = 0.5 * (bounds.lower[i] + bounds.upper[i]);
      const double hw = bounds.upper[i] - bounds.lower[i];
      y[i] = rng.uniform(mid - hw, mid + hw);
      outside = outside || y[i] < bounds.lower[i] || y[i] > bounds.upper[i];
    }
    if (outside && predicate(y)) throw ConfigError("oracle: predicate accepts a point outside the declared bounds");
  }
  if (!predicate(c)) throw ConfigError("oracle: reference centre is not accepted by the predicate");
  return ConvexBody(OracleShape{std::move(predicate), std::move(bounds), symmetric, declared_volume, std::move(c)}, n,
                    1.0);
}

void ConvexBody::require_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ConfigError("dimension mismatch: body has dimension " + std::to_string(dim_) + ", point has " +
                      std::to_string(x.size()));
  }
}

bool ConvexBody::is_centrally_symmetric() const {
  if (const auto* o = std::get_if<OracleShape>(&shape_)) return o->symmetric;
  return true;
}

bool ConvexBody::contains(std::span<const double> x) const {
  require_dim(x);
  const double a = dilation_;
  return std::visit(
      overloaded{
          [&](const BoxShape& b) {
            for (std::size_t i = 0; i < dim_; ++i) {
              const double lo = a * b.lower[i];
              const double hi = a * b.upper[i];
              if (b.lower_closed[i] ? x[i] < lo : x[i] <= lo) return false;
              if (b.upper_closed[i] ? x[i] > hi : x[i] >= hi) return false;
            }
            return true;
          },
          [&](const BallShape& b) {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
              const double d = x[i] - a * b.center[i];
              s += d * d;
            }
            const double r = a * b.radius;
            return s <= r * r;
          },
          [&](const EllipsoidShape& e) {
            Point d(dim_);
            for (std::size_t i = 0; i < dim_; ++i) d[i] = x[i] - a * e.center[i];
            return quad_form(e.form, d) <= a * a;
          },
          [&](const OracleShape& o) {
            if (a == 1.0) return o.predicate(x);
            Point y(x.begin(), x.end());
            for (double& v : y) v /= a;
            return o.predicate(y);
          },
      },
      shape_);
}

ConvexBody ConvexBody::dilate(double alpha) const {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ConfigError("dilate: factor must be positive");
  ConvexBody out = *this;
  out.dilation_ *= alpha;
  return out;
}

double ConvexBody::exact_volume() const {
  const double scale = std::pow(dilation_, static_cast<double>(dim_));
  return std::visit(overloaded{
                        [&](const BoxShape& b) {
                          double v = 1.0;
                          for (std::size_t i = 0; i < dim_; ++i) v *= b.upper[i] - b.lower[i];
                          return v * scale;
                        },
                        [&](const BallShape& b) {
                          return unit_ball_volume(dim_) * std::pow(b.radius, static_cast<double>(dim_)) * scale;
                        },
                        [&](const EllipsoidShape& e) {
                          return unit_ball_volume(dim_) / std::sqrt(e.form_determinant) * scale;
                        },
                        [&](const OracleShape& o) -> double {
                          if (!o.declared_volume) throw Unsupported("oracle body has no declared volume");
                          return *o.declared_volume * scale;
                        },
                    },
                    shape_);
}

VolumeEstimate ConvexBody::volume(std::uint64_t mc_samples, Stream& rng) const {
  const auto* o = std::get_if<OracleShape>(&shape_);
  if (o == nullptr || o->declared_volume) return {exact_volume(), VolumeEstimate::Kind::exact, 0.0, 0};
  if (mc_samples == 0) throw ConfigError("volume: Monte Carlo estimate needs at least one sample");
  const AxisBox bb = bounding_box();
  double box_volume = 1.0;
  for (std::size_t i = 0; i < dim_; ++i) box_volume *= bb.upper[i] - bb.lower[i];
  std::uint64_t hits = 0;
  Point y(dim_);
  for (std::uint64_t s = 0; s < mc_samples; ++s) {
    for (std::size_t i = 0; i < dim_; ++i) y[i] = rng.uniform(bb.lower[i], bb.upper[i]);
    if (contains(y)) ++hits;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(mc_samples);
  const double hw = kZ99 * std::sqrt(f * (1.0 - f) / static_cast<double>(mc_samples)) * box_volume;
  return {f * box_volume, VolumeEstimate::Kind::monte_carlo, hw, mc_samples};
}

bool ConvexBody::origin_interior() const {
  const Point zero(dim_, 0.0);
  if (!contains(zero)) return false;
  const AxisBox bb = bounding_box();
  double width = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) width = std::max(width, bb.upper[i] - bb.lower[i]);
  const double tau = 1e-9 * width;
  Point y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (double s : {tau, -tau}) {
      y[i] = s;
      if (!contains(y)) return false;
    }
    y[i] = 0.0;
  }
  return true;
}

double ConvexBody::star_gauge_bisect(const std::function<bool(std::span<const double>)>& in_body,
                                     std::span<const double> x, const AxisBox& bounds) const {
  double lo = box_gauge(x, bounds.lower, bounds.upper);
  if (lo == 0.0) return 0.0;
  Point y(dim_);
  auto member_at = [&](double t) {
    for (std::size_t i = 0; i < dim_; ++i) y[i] = x[i] / t;
    return in_body(y);
  };
  double hi = lo;
  while (!member_at(hi)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Unsupported("gauge: bisection failed to bracket");
  }
  while (hi - lo > kGaugeRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (member_at(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

GaugeValue ConvexBody::gauge(std::span<const double> x) const {
  require_dim(x);
  if (!origin_interior()) throw Unsupported("gauge: origin is not an interior point of the body");
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) return {0.0, false};
  const double a = dilation_;
  return std::visit(
      overloaded{
          [&](const BoxShape& b) -> GaugeValue { return {box_gauge(x, b.lower, b.upper) / a, false}; },
          [&](const BallShape& b) -> GaugeValue {
            const double r2 = b.radius * b.radius;
            double qx = 0, qc = 0, bxc = 0;
            for (std::size_t i = 0; i < dim_; ++i) {
              qx += x[i] * x[i] / r2;
              qc += b.center[i] * b.center[i] / r2;
              bxc += x[i] * b.center[i] / r2;
            }
            return {quadric_gauge(b.center, qx, qc, bxc) / a, false};
          },
          [&](const EllipsoidShape& e) -> GaugeValue {
            const double g = quadric_gauge(e.center, quad_form(e.form, x), quad_form(e.form, e.center),
                                           bilinear(e.form, x, e.center));
            return {g / a, false};
          },
          [&](const OracleShape& o) -> GaugeValue {
            const AxisBox bb = bounding_box();
            auto in_body = [this](std::span<const double> y) { return contains(y); };
            const double g = star_gauge_bisect(in_body, x, bb);
            if (o.symmetric) return {g, false};
            Point neg(x.begin(), x.end());
            for (double& v : neg) v = -v;
            return {std::max(g, star_gauge_bisect(in_body, neg, bb)), true};
          },
      },
      shape_);
}

double ConvexBody::centered_gauge(std::span<const double> x) const {
  require_dim(x);
  const double a = dilation_;
  return std::visit(overloaded{
                        [&](const BoxShape& b) {
                          double g = 0.0;
                          for (std::size_t i = 0; i < dim_; ++i) {
                            g = std::max(g, std::abs(x[i]) / (0.5 * (b.upper[i] - b.lower[i])));
                          }
                          return g / a;
                        },
                        [&](const BallShape& b) {
                          double s = 0.0;
                          for (double v : x) s += v * v;
                          return std::sqrt(s) / (b.radius * a);
                        },
                        [&](const EllipsoidShape& e) { return std::sqrt(quad_form(e.form, x)) / a; },
                        [&](const OracleShape& o) {
                          const Point c = center();
                          AxisBox bb = bounding_box();
                          for (std::size_t i = 0; i < dim_; ++i) {
                            bb.lower[i] -= c[i];
                            bb.upper[i] -= c[i];
                          }
                          Point shifted(dim_);
                          auto in_body = [&](std::span<const double> y) {
                            for (std::size_t i = 0; i < dim_; ++i) shifted[i] = y[i] + c[i];
                            return contains(shifted);
                          };
                          const double g = star_gauge_bisect(in_body, x, bb);
                          if (o.symmetric) return g;
                          Point neg(x.begin(), x.end());
                          for (double& v : neg) v = -v;
                          return std::max(g, star_gauge_bisect(in_body, neg, bb));
                        },
                    },
                    shape_);
}

double ConvexBody::difference_gauge(std::span<const double> v) const {
  require_dim(v);
  const double a = dilation_;
  return std::visit(overloaded{
                        [&](const BoxShape& b) {
                          double g = 0.0;
                          for (std::size_t i = 0; i < dim_; ++i) {
                            g = std::max(g, std::abs(v[i]) / (b.upper[i] - b.lower[i]));
                          }
                          return g / a;
                        },
                        [&](const BallShape& b) {
                          double s = 0.0;
                          for (double e : v) s += e * e;
                          return std::sqrt(s) / (2.0 * b.radius * a);
                        },
                        [&](const EllipsoidShape& e) { return std::sqrt(quad_form(e.form, v)) / (2.0 * a); },
                        [&](const OracleShape&) -> double {
                          throw Unsupported("difference gauge is not available for oracle bodies");
                        },
                    },
                    shape_);
}

AxisBox ConvexBody::bounding_box() const {
  const double a = dilation_;
  AxisBox out{Point(dim_), Point(dim_)};
  std::visit(overloaded{
                 [&](const BoxShape& b) {
                   for (std::size_t i = 0; i < dim_; ++i) {
                     out.lower[i] = a * b.lower[i];
                     out.upper[i] = a * b.upper[i];
                   }
                 },
                 [&](const BallShape& b) {
                   for (std::size_t i = 0; i < dim_; ++i) {
                     out.lower[i] = a * (b.center[i] - b.radius);
                     out.upper[i] = a * (b.center[i] + b.radius);
                   }
                 },
                 [&](const EllipsoidShape& e) {
                   for (std::size_t i = 0; i < dim_; ++i) {
                     const double hw = std::sqrt(e.form_inverse(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
                     out.lower[i] = a * (e.center[i] - hw);
                     out.upper[i] = a * (e.center[i] + hw);
                   }
                 },
                 [&](const OracleShape& o) {
                   for (std::size_t i = 0; i < dim_; ++i) {
                     out.lower[i] = a * o.bounds.lower[i];
                     out.upper[i] = a * o.bounds.upper[i];
                   }
                 },
             },
             shape_);
  return out;
}

Point ConvexBody::difference_halfwidths() const {
  const AxisBox bb = bounding_box();
  Point hw(dim_);
  for (std::size_t i = 0; i < dim_; ++i) hw[i] = bb.upper[i] - bb.lower[i];
  return hw;
}

Point ConvexBody::center() const {
  Point c = std::visit(overloaded{
                           [&](const BoxShape& b) {
                             Point m(dim_);
                             for (std::size_t i = 0; i < dim_; ++i) m[i] = 0.5 * (b.lower[i] + b.upper[i]);
                             return m;
                           },
                           [&](const BallShape& b) { return b.center; },
                           [&](const EllipsoidShape& e) { return e.center; },
                           [&](const OracleShape& o) { return o.center; },
                       },
                       shape_);
  for (double& v : c) v *= dilation_;
  return c;
}

}  // namespace smoothcover
