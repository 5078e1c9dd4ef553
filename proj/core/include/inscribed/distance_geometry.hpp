#pragma once

// Distance-geometry primitives on labeled point sets: Cayley-Menger
// determinants, constructibility, simplex volume and the circumsphere.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace inscribed::distgeo {

/// Symmetric table of pairwise distances between n labeled points. Stored as
/// raw lengths; squares are formed on demand.
class DistanceSet {
 public:
  /// Validates symmetry, zero diagonal and strictly positive off-diagonal
  /// entries. Throws Error(InvalidArgument) otherwise.
  static DistanceSet from_table(const Eigen::MatrixXd& table);

  /// Triangle with d01 = a, d02 = b, d12 = c.
  static DistanceSet triangle(double a, double b, double c);

  int size() const { return static_cast<int>(d_.rows()); }
  double operator()(int i, int j) const { return d_(i, j); }
  double squared(int i, int j) const { return d_(i, j) * d_(i, j); }
  double max_distance() const { return d_.maxCoeff(); }
  const Eigen::MatrixXd& table() const { return d_; }

  DistanceSet restricted(std::span<const int> subset) const;

 private:
  explicit DistanceSet(Eigen::MatrixXd d) : d_(std::move(d)) {}

  Eigen::MatrixXd d_;
};

/// Points are the columns of a k x n matrix.
using PointSet = Eigen::MatrixXd;

struct Circumsphere {
  Eigen::VectorXd center;
  double radius = 0.0;
};

struct SubsetCheck {
  std::vector<int> subset;
  double determinant = 0.0;
  int expected_sign = 0;
  bool ok = false;
};

struct ConstructibilityReport {
  bool constructible = false;
  std::vector<SubsetCheck> subsets;

  std::vector<SubsetCheck> failures() const;
};

/// Bordered Cayley-Menger determinant of the whole set.
double cm_det(const DistanceSet& d);

/// Cayley-Menger determinant restricted to the listed labels (|subset| >= 2).
double cm_det(const DistanceSet& d, std::span<const int> subset);

/// Every subset of h >= 2 labels must have a nonzero determinant of sign
/// (-1)^h, including the full set. "Nonzero" is scale-aware:
/// |det| > 1e-10 * (max d)^(2(h-1)).
ConstructibilityReport is_constructible(const DistanceSet& d);

/// k-volume of the simplex on n = k+1 points from the Cayley-Menger
/// determinant. Degenerate inputs give 0; a clearly negative squared volume
/// throws Error(InconsistentDistances).
double simplex_volume(const DistanceSet& d);

double heron_area(double a, double b, double c);

/// R^2 = -det(D2) / (2 CM) with D2 the zero-diagonal table of squared
/// distances. Throws Error(DegenerateSimplex) when CM vanishes.
double circumradius(const DistanceSet& d);

/// Solves |x - p_i|^2 = |x - p_0|^2 for i = 1..k.
Circumsphere circumcenter(const PointSet& points);

DistanceSet distances_of(const PointSet& points);

}  // namespace inscribed::distgeo
