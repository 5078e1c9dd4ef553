#include "inscribed/similarity.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "inscribed/distance_geometry.hpp"
#include "inscribed/error.hpp"

namespace inscribed::simspace {
namespace {

struct SymmetricRoots {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inverse_sqrt;
};

SymmetricRoots symmetric_roots(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::NotPositiveDefinite, "matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::NotPositiveDefinite, "matrix is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "eigendecomposition failed");
  }
  const Eigen::VectorXd& w = eig.eigenvalues();
  const double tol = 1e-13 * std::max(w.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (w.minCoeff() <= tol) {
    std::ostringstream os;
    os << "smallest eigenvalue " << w.minCoeff() << " is not positive";
    throw Error(ErrorKind::NotPositiveDefinite, os.str());
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  SymmetricRoots out;
  out.sqrt = v * w.cwiseSqrt().asDiagonal() * v.transpose();
  out.inverse_sqrt = v * w.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  out.sqrt = 0.5 * (out.sqrt + out.sqrt.transpose()).eval();
  out.inverse_sqrt = 0.5 * (out.inverse_sqrt + out.inverse_sqrt.transpose()).eval();
  return out;
}

double column_hadamard_ratio(const Eigen::MatrixXd& a) {
  double norms = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) norms *= a.col(j).norm();
  return norms == 0.0 ? 0.0 : std::abs(a.determinant()) / norms;
}

}  // namespace

SimplexConfig::SimplexConfig(Eigen::MatrixXd vertices) : q_(std::move(vertices)) {
  if (q_.rows() < 1 || q_.cols() != q_.rows() + 1) {
    throw Error(ErrorKind::InvalidArgument, "a simplex configuration in R^k needs k+1 points");
  }
  if (!q_.allFinite()) throw Error(ErrorKind::InvalidArgument, "configuration has non-finite coordinates");
  for (Eigen::Index i = 0; i < q_.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < q_.cols(); ++j) {
      if ((q_.col(i) - q_.col(j)).norm() == 0.0) {
        std::ostringstream os;
        os << "points " << i << " and " << j << " coincide";
        throw Error(ErrorKind::InvalidArgument, os.str());
      }
    }
  }
}

Pose::Pose(Eigen::MatrixXd u, double tolerance) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "pose must be a non-empty square matrix");
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(u_.rows(), u_.cols());
  const double err = (u_.transpose() * u_ - id).norm();
  if (!(err <= tolerance)) {
    std::ostringstream os;
    os << "pose is not orthogonal (|U^T U - I| = " << err << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  det_sign_ = u_.determinant() > 0.0 ? 1 : -1;
}

Pose Pose::identity(int k) { return Pose(Eigen::MatrixXd::Identity(k, k)); }

Pose Pose::planar(double angle, bool reflected) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle),
       std::sin(angle), std::cos(angle);
  if (reflected) r.col(1) *= -1.0;
  return Pose(r);
}

double Pose::planar_angle() const {
  if (dim() != 2) throw Error(ErrorKind::InvalidArgument, "planar angle needs a 2x2 pose");
  return std::atan2(u_(1, 0), u_(0, 0));
}

RatioTable::RatioTable(const SimplexConfig& q) : n_(q.size()), r_(static_cast<std::size_t>(n_ * n_ * n_), 0.0) {
  const auto d = distgeo::distances_of(q.vertices());
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int l = 0; l < n_; ++l) {
        if (i == j || j == l || i == l) continue;
        r_[(i * n_ + j) * n_ + l] = d(i, j) / d(i, l);
      }
    }
  }
}

double RatioTable::max_deviation(const RatioTable& other) const {
  if (other.n_ != n_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int l = 0; l < n_; ++l) {
        if (i == j || j == l || i == l) continue;
        worst = std::max(worst, std::abs((*this)(i, j, l) - other(i, j, l)));
      }
    }
  }
  return worst;
}

Eigen::MatrixXd SimilarityClass::unit_offsets() const {
  Eigen::MatrixXd w(dim(), dim());
  for (int i = 1; i <= dim(); ++i) w.col(i - 1) = rho_[i] * pi_.col(i - 1);
  return w;
}

Eigen::VectorXd direction(const SimplexConfig& q, int i, int j) {
  const Eigen::VectorXd diff = q.vertex(i) - q.vertex(j);
  const double n = diff.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "direction between coincident points");
  return diff / n;
}

double ratio(const SimplexConfig& q, int i, int j, int l) {
  if (i == j || j == l || i == l) throw Error(ErrorKind::InvalidArgument, "ratio needs distinct labels");
  const double num = (q.vertex(i) - q.vertex(j)).norm();
  const double den = (q.vertex(i) - q.vertex(l)).norm();
  if (!(num > 0.0) || !(den > 0.0)) throw Error(ErrorKind::InvalidArgument, "ratio between coincident points");
  return num / den;
}

Eigen::MatrixXd direction_matrix(const SimplexConfig& q) {
  const int k = q.dim();
  Eigen::MatrixXd pi(k, k);
  for (int i = 1; i <= k; ++i) pi.col(i - 1) = direction(q, i, 0);
  return pi;
}

Eigen::MatrixXd gram_from_ratios(const RatioTable& r) {
  const int k = r.size() - 1;
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "ratio table too small");
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(k, k);
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      const double c = 0.5 * (r(0, i, j) + r(0, j, i) - r(i, j, 0) * r(j, i, 0));
      g(i - 1, j - 1) = g(j - 1, i - 1) = c;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateClass, "Gram matrix of the ratio table is not positive definite");
  }
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
  if (diag.minCoeff() <= 1e-8) {
    throw Error(ErrorKind::DegenerateClass, "Gram matrix of the ratio table is numerically singular");
  }
  return g;
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) { return symmetric_roots(m).sqrt; }

void orthonormalize_columns(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
    const double n = m.col(j).norm();
    if (!(n > 0.0)) throw Error(ErrorKind::RankDeficient, "columns are linearly dependent");
    m.col(j) /= n;
  }
}

PolarFactors polar_decompose(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "polar decomposition needs a square matrix");
  }
  if (column_hadamard_ratio(a) <= 1e-12) {
    throw Error(ErrorKind::RankDeficient, "matrix is singular; polar factor not unique");
  }
  const SymmetricRoots roots = symmetric_roots(a.transpose() * a);
  Eigen::MatrixXd u = a * roots.inverse_sqrt;
  orthonormalize_columns(u);
  return PolarFactors{Pose(std::move(u)), roots.sqrt};
}

SimilarityClass normalize_reference(const SimplexConfig& delta) {
  const auto sphere = distgeo::circumcenter(delta.vertices());
  Eigen::MatrixXd hat = (delta.vertices().colwise() - sphere.center) / sphere.radius;
  const PolarFactors polar = polar_decompose(direction_matrix(SimplexConfig(hat)));
  hat = polar.u.matrix().transpose() * hat;

  SimilarityClass cls{SimplexConfig(hat)};
  cls.ratios_ = RatioTable(cls.delta_hat_);
  cls.pi_ = direction_matrix(cls.delta_hat_);
  const SymmetricRoots roots = symmetric_roots(gram_from_ratios(cls.ratios_));
  cls.p_ = roots.sqrt;
  cls.p_inv_ = roots.inverse_sqrt;

  const RatioTable original(delta);
  const double drift = original.max_deviation(cls.ratios_);
  if (drift > 1e-9) {
    std::ostringstream os;
    os << "normalization changed the ratio table by " << drift;
    throw Error(ErrorKind::DegenerateClass, os.str());
  }
  if ((cls.pi_ - cls.p_).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorKind::DegenerateClass, "normalized direction matrix is not the SPD factor");
  }

  const int k = delta.dim();
  cls.base_edge_ = (cls.delta_hat_.vertex(1) - cls.delta_hat_.vertex(0)).norm();
  cls.rho_.assign(static_cast<std::size_t>(k + 1), 0.0);
  for (int i = 1; i <= k; ++i) {
    cls.rho_[i] = (cls.delta_hat_.vertex(i) - cls.delta_hat_.vertex(0)).norm() / cls.base_edge_;
  }
  return cls;
}

Pose pose(const SimplexConfig& q, const SimilarityClass& cls, double tolerance) {
  if (q.dim() != cls.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  const double dev = RatioTable(q).max_deviation(cls.ratios());
  if (!(dev <= tolerance)) {
    std::ostringstream os;
    os << "configuration is not similar to the reference (max ratio deviation " << dev << ")";
    throw NotSimilarError(os.str(), dev);
  }
  Eigen::MatrixXd u = direction_matrix(q) * cls.p_inverse();
  orthonormalize_columns(u);
  return Pose(std::move(u));
}

SimplexConfig embed(const SimilarityClass& cls, const SimParams& params) {
  if (!(params.lambda > 0.0)) {
    throw Error(ErrorKind::BoundaryConfiguration, "scale must be positive; lambda = 0 is the collision face");
  }
  const int k = cls.dim();
  if (params.pose.dim() != k || params.center.size() != k) {
    throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  }
  Eigen::MatrixXd q(k, k + 1);
  q.col(0) = params.center;
  const Eigen::MatrixXd offsets = params.pose.matrix() * cls.unit_offsets();
  for (int i = 1; i <= k; ++i) q.col(i) = params.center + params.lambda * offsets.col(i - 1);
  return SimplexConfig(std::move(q));
}

SimParams ps(const SimplexConfig& q, const SimilarityClass& cls, double tolerance) {
  return SimParams{pose(q, cls, tolerance), (q.vertex(1) - q.vertex(0)).norm(), q.vertex(0)};
}

bool is_similar(const SimplexConfig& q, const SimilarityClass& cls, double tolerance) {
  if (q.dim() != cls.dim()) return false;
  return RatioTable(q).max_deviation(cls.ratios()) <= tolerance;
}

Eigen::Matrix3d axis_rotation(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "rotation axis must be nonzero");
  return Eigen::AngleAxisd(angle, axis / n).toRotationMatrix();
}

}  // namespace inscribed::simspace
