#include "inscribed/distance_geometry.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <cmath>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed::distgeo {
namespace {

constexpr double kNonzeroTolerance = 1e-10;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// |det| relative to the product of row norms; 1 for orthogonal rows, 0 for
// singular matrices.
double hadamard_ratio(const Eigen::MatrixXd& a) {
  double norms = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) norms *= a.row(i).norm();
  if (norms == 0.0) return 0.0;
  return std::abs(a.determinant()) / norms;
}

}  // namespace

DistanceSet DistanceSet::from_table(const Eigen::MatrixXd& table) {
  if (table.rows() != table.cols() || table.rows() < 2) {
    throw Error(ErrorKind::InvalidArgument, "distance table must be square with at least 2 points");
  }
  if (!table.allFinite()) throw Error(ErrorKind::InvalidArgument, "distance table has non-finite entries");
  const double scale = table.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    if (table(i, i) != 0.0) throw Error(ErrorKind::InvalidArgument, "distance table diagonal must be zero");
    for (Eigen::Index j = i + 1; j < table.cols(); ++j) {
      if (std::abs(table(i, j) - table(j, i)) > 1e-12 * scale) {
        std::ostringstream os;
        os << "distance table is not symmetric at (" << i << "," << j << ")";
        throw Error(ErrorKind::InvalidArgument, os.str());
      }
      if (!(table(i, j) > 0.0)) {
        std::ostringstream os;
        os << "distance d(" << i << "," << j << ") must be positive";
        throw Error(ErrorKind::InvalidArgument, os.str());
      }
    }
  }
  Eigen::MatrixXd sym = 0.5 * (table + table.transpose());
  return DistanceSet(std::move(sym));
}

DistanceSet DistanceSet::triangle(double a, double b, double c) {
  Eigen::Matrix3d t;
  t << 0, a, b,
       a, 0, c,
       b, c, 0;
  return from_table(t);
}

DistanceSet DistanceSet::restricted(std::span<const int> subset) const {
  const auto h = static_cast<Eigen::Index>(subset.size());
  Eigen::MatrixXd sub(h, h);
  for (Eigen::Index a = 0; a < h; ++a) {
    for (Eigen::Index b = 0; b < h; ++b) {
      const int i = subset[a];
      const int j = subset[b];
      if (i < 0 || i >= size() || j < 0 || j >= size()) {
        throw Error(ErrorKind::InvalidArgument, "subset label out of range");
      }
      sub(a, b) = d_(i, j);
    }
  }
  return from_table(sub);
}

std::vector<SubsetCheck> ConstructibilityReport::failures() const {
  std::vector<SubsetCheck> out;
  std::copy_if(subsets.begin(), subsets.end(), std::back_inserter(out),
               [](const SubsetCheck& s) { return !s.ok; });
  return out;
}

double cm_det(const DistanceSet& d) {
  std::vector<int> all(d.size());
  for (int i = 0; i < d.size(); ++i) all[i] = i;
  return cm_det(d, all);
}

double cm_det(const DistanceSet& d, std::span<const int> subset) {
  const auto h = static_cast<Eigen::Index>(subset.size());
  if (h < 2) throw Error(ErrorKind::InvalidArgument, "Cayley-Menger determinant needs at least 2 points");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(h + 1, h + 1);
  for (Eigen::Index a = 1; a <= h; ++a) {
    m(0, a) = 1.0;
    m(a, 0) = 1.0;
  }
  for (Eigen::Index a = 0; a < h; ++a) {
    for (Eigen::Index b = 0; b < h; ++b) {
      const int i = subset[a];
      const int j = subset[b];
      if (i < 0 || i >= d.size() || j < 0 || j >= d.size()) {
        throw Error(ErrorKind::InvalidArgument, "subset label out of range");
      }
      if (i == j && a != b) throw Error(ErrorKind::InvalidArgument, "subset labels must be distinct");
      m(a + 1, b + 1) = d.squared(i, j);
    }
  }
  return m.partialPivLu().determinant();
}

ConstructibilityReport is_constructible(const DistanceSet& d) {
  ConstructibilityReport report;
  report.constructible = true;
  const int n = d.size();
  const double dmax = d.max_distance();
  // Enumerate subsets by bitmask, ordered by size then lexicographically.
  for (int h = 2; h <= n; ++h) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != h) continue;
      SubsetCheck check;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) check.subset.push_back(i);
      }
      check.determinant = cm_det(d, check.subset);
      check.expected_sign = (h % 2 == 0) ? 1 : -1;
      const double tol = kNonzeroTolerance * std::pow(dmax, 2.0 * (h - 1));
      check.ok = std::abs(check.determinant) > tol && check.determinant * check.expected_sign > 0.0;
      report.constructible = report.constructible && check.ok;
      report.subsets.push_back(std::move(check));
    }
  }
  return report;
}

double simplex_volume(const DistanceSet& d) {
  const int k = d.size() - 1;
  const double cm = cm_det(d);
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  const double vol2 = sign * cm / (std::pow(2.0, k) * factorial(k) * factorial(k));
  const double tol = kNonzeroTolerance * std::pow(d.max_distance(), 2.0 * k);
  if (vol2 < -tol) {
    std::ostringstream os;
    os << "squared volume " << vol2 << " is negative; distances do not embed in R^" << k;
    throw Error(ErrorKind::InconsistentDistances, os.str());
  }
  return std::sqrt(std::max(0.0, vol2));
}

double heron_area(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "triangle sides must be positive");
  }
  // Sort so that a >= b >= c; this grouping keeps every factor accurate.
  if (a < b) std::swap(a, b);
  if (a < c) std::swap(a, c);
  if (b < c) std::swap(b, c);
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return std::sqrt(std::max(0.0, p)) / 4.0;
}

double circumradius(const DistanceSet& d) {
  const int n = d.size();
  const int k = n - 1;
  const double cm = cm_det(d);
  if (std::abs(cm) <= kNonzeroTolerance * std::pow(d.max_distance(), 2.0 * k)) {
    throw Error(ErrorKind::DegenerateSimplex, "Cayley-Menger determinant vanishes; no circumsphere");
  }
  Eigen::MatrixXd sq(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sq(i, j) = d.squared(i, j);
  }
  const double r2 = -sq.partialPivLu().determinant() / (2.0 * cm);
  if (!(r2 > 0.0)) throw Error(ErrorKind::DegenerateSimplex, "non-positive squared circumradius");
  return std::sqrt(r2);
}

Circumsphere circumcenter(const PointSet& points) {
  const Eigen::Index k = points.rows();
  if (points.cols() != k + 1 || k < 1) {
    throw Error(ErrorKind::InvalidArgument, "circumcenter needs k+1 points in R^k");
  }
  Eigen::MatrixXd a(k, k);
  Eigen::VectorXd b(k);
  const Eigen::VectorXd p0 = points.col(0);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::VectorXd pi = points.col(i + 1);
    a.row(i) = 2.0 * (pi - p0).transpose();
    b(i) = pi.squaredNorm() - p0.squaredNorm();
  }
  if (hadamard_ratio(a) <= 1e-12) {
    throw Error(ErrorKind::DegenerateSimplex, "points are affinely dependent; no circumcenter");
  }
  Circumsphere s;
  s.center = a.partialPivLu().solve(b);
  s.radius = (s.center - p0).norm();
  return s;
}

DistanceSet distances_of(const PointSet& points) {
  const Eigen::Index n = points.cols();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dij = (points.col(i) - points.col(j)).norm();
      if (!(dij > 0.0)) {
        std::ostringstream os;
        os << "points " << i << " and " << j << " coincide";
        throw Error(ErrorKind::InvalidArgument, os.str());
      }
      d(i, j) = d(j, i) = dij;
    }
  }
  return DistanceSet::from_table(d);
}

}  // namespace inscribed::distgeo
