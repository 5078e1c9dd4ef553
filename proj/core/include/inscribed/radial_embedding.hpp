#pragma once

// Star-shaped embeddings of S^{k-1} in R^k given as radial graphs
// u -> r(u) u over the unit sphere, k = 2 or 3.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "inscribed/radial_expr.hpp"

namespace inscribed::spheres {

/// Evaluations with r <= kRadiusFloor are rejected.
inline constexpr double kRadiusFloor = 1e-6;

/// Unit vector on S^{k-1}. Local charts are orthonormal tangent charts
/// centered at the point, mapped to the sphere by the exponential map, so
/// nothing degenerates at the poles of spherical coordinates.
class SpherePoint {
 public:
  /// Normalizes `v`; throws Error(ChartSingularity) for zero or non-finite v.
  explicit SpherePoint(const Eigen::VectorXd& v);

  static SpherePoint from_angle(double theta);
  /// phi from +z, theta azimuth.
  static SpherePoint from_spherical(double phi, double theta);

  int dim() const { return static_cast<int>(u_.size()); }
  const Eigen::VectorXd& unit() const { return u_; }

  double theta() const;
  /// Polar angle for k = 3; pi/2 for k = 2.
  double phi() const;

  /// k x (k-1) orthonormal basis of the tangent plane.
  Eigen::MatrixXd tangent_basis() const;

  /// Exponential map of an ambient tangent vector.
  SpherePoint exp(const Eigen::VectorXd& tangent) const;
  /// Inverse of exp for points not antipodal to this one.
  Eigen::VectorXd log(const SpherePoint& other) const;

  /// Point with local chart coordinates `s` (length k-1).
  SpherePoint chart_point(const Eigen::VectorXd& s) const { return exp(tangent_basis() * s); }
  Eigen::VectorXd chart_coordinates(const SpherePoint& other) const {
    return tangent_basis().transpose() * log(other);
  }

 private:
  Eigen::VectorXd u_;
};

struct RadialGradient {
  double radius = 0.0;
  /// Spherical gradient of r, tangent to the sphere at u.
  Eigen::VectorXd gradient;
};

struct TangentFrame {
  /// Orthonormal tangent basis of the sphere at u (k x (k-1)).
  Eigen::MatrixXd basis;
  /// d eval / d s for the chart u(s) = exp_u(basis s); columns span the
  /// tangent space of the embedded surface.
  Eigen::MatrixXd derivative;
};

enum class Family { Round, Ellipse, Trig, Expression };

class RadialEmbedding {
 public:
  static RadialEmbedding round(int dim);
  /// Ellipse with semi-axes a (x) and b (y) as a radial graph.
  static RadialEmbedding ellipse(double a, double b);
  /// r(theta) = c_0 + sum_n c_n cos(n theta) + s_n sin(n theta); cos_coeffs
  /// starts at n = 0, sin_coeffs at n = 1.
  static RadialEmbedding trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
  static RadialEmbedding expression(RadialExpr expr);
  static RadialEmbedding expression(std::string_view source, int dim);

  int dim() const;
  Family family() const;
  /// Isotopy parameter: r_t = (1 - t) + t r. Plain embeddings have t = 1.
  double time() const { return t_; }
  /// Minimum of r_t over a fixed sampling grid.
  double observed_min_radius() const;

  const std::vector<double>& parameters() const;
  const std::vector<double>& sin_parameters() const;
  /// Expression source (printed form) for Family::Expression.
  std::string expression_source() const;
  std::string describe() const;

  /// Throws Error(DegenerateRadius) at t = 1 or Error(PositivityViolation)
  /// for t < 1 when r_t <= kRadiusFloor.
  double radius(const SpherePoint& u) const;
  RadialGradient radius_gradient(const SpherePoint& u) const;
  Eigen::VectorXd eval(const SpherePoint& u) const;
  TangentFrame tangent_frame(const SpherePoint& u) const;

  /// r_t = (1 - t) + t r of the underlying function; t = 0 is the round
  /// sphere. Throws Error(PositivityViolation) naming the worst sample when
  /// the sampled minimum falls below the floor.
  RadialEmbedding isotopy(double t) const;

  /// r of the underlying function (t = 1) in spherical coordinates.
  AngleJet base_jet(double phi, double theta) const;

  struct Impl;

 private:
  explicit RadialEmbedding(std::shared_ptr<const Impl> impl, double t = 1.0) : impl_(std::move(impl)), t_(t) {}
  [[noreturn]] void radius_failure(const SpherePoint& u, double r) const;

  std::shared_ptr<const Impl> impl_;
  double t_ = 1.0;
};

}  // namespace inscribed::spheres
