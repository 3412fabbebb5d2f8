#pragma once

// Convex bodies: membership, origin dilation, volume, gauges and bounding boxes.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "smoothcover/random.hpp"

namespace smoothcover {

using Point = std::vector<double>;

struct AxisBox {
  Point lower;
  Point upper;
};

/// Coordinate box with per-face closedness. The default is closed on every face.
struct BoxShape {
  Point lower;
  Point upper;
  std::vector<bool> lower_closed;
  std::vector<bool> upper_closed;
};

struct BallShape {
  Point center;
  double radius;
};

/// {x : (x - c)^T A (x - c) <= 1} with A symmetric positive definite.
struct EllipsoidShape {
  Point center;
  Eigen::MatrixXd form;
  Eigen::MatrixXd form_inverse;
  double form_determinant;
};

/// Membership predicate with trusted metadata. Bounds must contain every accepted point.
struct OracleShape {
  std::function<bool(std::span<const double>)> predicate;
  AxisBox bounds;
  bool symmetric = false;
  std::optional<double> declared_volume;
  /// Reference interior point used for translation-invariant quantities; defaults to the
  /// centre of `bounds`.
  Point center;
};

using Shape = std::variant<BoxShape, BallShape, EllipsoidShape, OracleShape>;

struct VolumeEstimate {
  enum class Kind { exact, monte_carlo };
  double value = 0.0;
  Kind kind = Kind::exact;
  double half_width = 0.0;  // 99% confidence, 0 for exact
  std::uint64_t samples = 0;
};

struct GaugeValue {
  double value;
  /// True when the value is the gauge of K ∩ (-K) rather than of K itself.
  bool symmetrized;
};

/// A convex body alpha*K, alpha > 0, dilated about the origin.
class ConvexBody {
 public:
  static ConvexBody box(Point lower, Point upper);
  static ConvexBody box(Point lower, Point upper, std::vector<bool> lower_closed, std::vector<bool> upper_closed);
  /// [lower, upper) in every coordinate.
  static ConvexBody half_open_box(Point lower, Point upper);
  static ConvexBody ball(Point center, double radius);
  static ConvexBody ellipsoid(Point center, const Eigen::MatrixXd& form);
  /// Validates the declared bounds by sampling a region twice their size.
  static ConvexBody oracle(std::function<bool(std::span<const double>)> predicate, AxisBox bounds, bool symmetric,
                           std::optional<double> declared_volume = std::nullopt,
                           std::optional<Point> center = std::nullopt);

  std::size_t dimension() const { return dim_; }
  double dilation() const { return dilation_; }
  const Shape& shape() const { return shape_; }
  bool is_box() const { return std::holds_alternative<BoxShape>(shape_); }
  bool is_oracle() const { return std::holds_alternative<OracleShape>(shape_); }
  /// True for the shapes with closed-form volume and gauges.
  bool has_closed_form() const { return !is_oracle(); }
  /// Symmetric about its reference centre.
  bool is_centrally_symmetric() const;

  bool contains(std::span<const double> x) const;
  ConvexBody dilate(double alpha) const;
  VolumeEstimate volume(std::uint64_t mc_samples, Stream& rng) const;
  /// Exact volume; throws Unsupported for an oracle without a declared volume.
  double exact_volume() const;

  /// min{t >= 0 : x in t*body}. Unsupported unless 0 is interior.
  GaugeValue gauge(std::span<const double> x) const;
  /// Gauge of the translate body - centre(body), symmetrized when that translate is
  /// not symmetric. Covering radii are translation invariant, so this is what
  /// covering certification uses.
  double centered_gauge(std::span<const double> x) const;
  /// Gauge with respect to K - K. Unsupported for oracles.
  double difference_gauge(std::span<const double> v) const;

  AxisBox bounding_box() const;
  /// Half-widths of a box centred at 0 containing K - K.
  Point difference_halfwidths() const;
  /// alpha times the reference centre.
  Point center() const;

 private:
  ConvexBody(Shape shape, std::size_t dim, double dilation) : shape_(std::move(shape)), dim_(dim), dilation_(dilation) {}

  void require_dim(std::span<const double> x) const;
  bool origin_interior() const;
  double star_gauge_bisect(const std::function<bool(std::span<const double>)>& in_body,
                           std::span<const double> x, const AxisBox& bounds) const;

  Shape shape_;
  std::size_t dim_;
  double dilation_;
};

double unit_ball_volume(std::size_t n);

}  // namespace smoothcover
