#pragma once

// The space of simplices similar to a reference simplex: direction and ratio
// coordinates, the Gram matrix, symmetric square roots and polar factors,
// the pose map, and the parameterization (pose, scale, base vertex).

#include <vector>

#include <Eigen/Dense>

namespace inscribed::simspace {

/// Ordered (k+1)-tuple of points in R^k, stored as the columns of a
/// k x (k+1) matrix. Labels are significant: relabeling gives a different
/// configuration.
class SimplexConfig {
 public:
  /// Throws Error(InvalidArgument) unless vertices is k x (k+1), k >= 1, with
  /// pairwise distinct columns.
  explicit SimplexConfig(Eigen::MatrixXd vertices);

  int dim() const { return static_cast<int>(q_.rows()); }
  int size() const { return static_cast<int>(q_.cols()); }
  Eigen::VectorXd vertex(int i) const { return q_.col(i); }
  const Eigen::MatrixXd& vertices() const { return q_; }

 private:
  Eigen::MatrixXd q_;
};

/// Orthogonal k x k matrix with its determinant sign (+1 for Sim+).
class Pose {
 public:
  /// Throws Error(InvalidArgument) if U^T U deviates from I by more than
  /// `tolerance` (Frobenius).
  explicit Pose(Eigen::MatrixXd u, double tolerance = 1e-10);

  static Pose identity(int k);
  /// Planar rotation by `angle`, optionally followed by the reflection
  /// diag(1, -1) applied first (det -1).
  static Pose planar(double angle, bool reflected = false);

  const Eigen::MatrixXd& matrix() const { return u_; }
  int det_sign() const { return det_sign_; }
  int dim() const { return static_cast<int>(u_.rows()); }

  /// Angle of the first column for k = 2.
  double planar_angle() const;

 private:
  Eigen::MatrixXd u_;
  int det_sign_ = 1;
};

/// Pose, scale (|q1 - q0|) and base vertex q0.
struct SimParams {
  Pose pose;
  double lambda = 0.0;
  Eigen::VectorXd center;
};

/// r(i, j, l) = |q_i - q_j| / |q_i - q_l| over distinct labels.
class RatioTable {
 public:
  RatioTable() = default;
  explicit RatioTable(const SimplexConfig& q);

  int size() const { return n_; }
  double operator()(int i, int j, int l) const { return r_[(i * n_ + j) * n_ + l]; }

  /// Max |r_ijl(this) - r_ijl(other)| over distinct triples.
  double max_deviation(const RatioTable& other) const;

 private:
  int n_ = 0;
  std::vector<double> r_;
};

struct PolarFactors {
  Pose u;
  Eigen::MatrixXd p;
};

/// Reference data for one similarity class. Built by normalize_reference and
/// immutable afterwards.
class SimilarityClass {
 public:
  /// Normalized reference: circumcenter 0, circumradius 1, pose identity.
  const SimplexConfig& reference() const { return delta_hat_; }
  const RatioTable& ratios() const { return ratios_; }
  /// Columns are the unit directions pi_{i0} of the reference, i = 1..k.
  const Eigen::MatrixXd& directions() const { return pi_; }
  /// SPD matrix with directions() = P (pose identity).
  const Eigen::MatrixXd& p() const { return p_; }
  const Eigen::MatrixXd& p_inverse() const { return p_inv_; }
  /// rho(i) = d_0i / d_01 of the reference for i = 1..k; rho(0) = 0.
  double rho(int i) const { return rho_[i]; }
  /// d_01 of the reference.
  double base_edge() const { return base_edge_; }
  int dim() const { return delta_hat_.dim(); }

  /// Offsets q_i - q_0 of the reference, divided by base_edge(); column i is
  /// rho(i) * pi_{i0}.
  Eigen::MatrixXd unit_offsets() const;

 private:
  friend SimilarityClass normalize_reference(const SimplexConfig& delta);
  explicit SimilarityClass(SimplexConfig reference) : delta_hat_(std::move(reference)) {}

  SimplexConfig delta_hat_;
  RatioTable ratios_;
  Eigen::MatrixXd pi_;
  Eigen::MatrixXd p_;
  Eigen::MatrixXd p_inv_;
  std::vector<double> rho_;
  double base_edge_ = 0.0;
};

inline constexpr double kDefaultSimilarityTolerance = 1e-8;

Eigen::VectorXd direction(const SimplexConfig& q, int i, int j);
double ratio(const SimplexConfig& q, int i, int j, int l);

/// Pi(q) = [pi_10 ... pi_k0].
Eigen::MatrixXd direction_matrix(const SimplexConfig& q);

/// Law-of-cosines Gram matrix of the directions pi_{i0}. Throws
/// Error(DegenerateClass) when the result is not positive definite.
Eigen::MatrixXd gram_from_ratios(const RatioTable& ratios);

/// Unique SPD square root via symmetric eigendecomposition. Throws
/// Error(NotPositiveDefinite) for non-symmetric or non-positive input.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m);

/// A = U P with P = sqrt(A^T A). Throws Error(RankDeficient) for singular A.
PolarFactors polar_decompose(const Eigen::MatrixXd& a);

/// Modified Gram-Schmidt on the columns, in place.
void orthonormalize_columns(Eigen::MatrixXd& m);

SimilarityClass normalize_reference(const SimplexConfig& delta);

/// U with Pi(q) = U P. Throws NotSimilarError when the ratio deviation
/// exceeds `tolerance`.
Pose pose(const SimplexConfig& q, const SimilarityClass& cls,
          double tolerance = kDefaultSimilarityTolerance);

/// q_0 = center, q_i = center + lambda rho_i U pi_{i0}. Throws
/// Error(BoundaryConfiguration) for lambda <= 0.
SimplexConfig embed(const SimilarityClass& cls, const SimParams& params);

SimParams ps(const SimplexConfig& q, const SimilarityClass& cls,
             double tolerance = kDefaultSimilarityTolerance);

bool is_similar(const SimplexConfig& q, const SimilarityClass& cls,
                double tolerance = kDefaultSimilarityTolerance);

/// Rotation about a unit axis in R^3 (Rodrigues).
Eigen::Matrix3d axis_rotation(const Eigen::Vector3d& axis, double angle);

}  // namespace inscribed::simspace
