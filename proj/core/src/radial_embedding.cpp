#include "inscribed/radial_embedding.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed::spheres {
namespace {

constexpr double kPoleThreshold = 1e-8;
constexpr double kPoleStep = 1e-5;

}  // namespace

// ---------------------------------------------------------------------------
// SpherePoint

SpherePoint::SpherePoint(const Eigen::VectorXd& v) {
  if (v.size() < 2 || v.size() > 3) throw Error(ErrorKind::InvalidArgument, "sphere points live in R^2 or R^3");
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::ChartSingularity, "cannot place a zero or non-finite vector on the sphere");
  }
  u_ = v / n;
}

SpherePoint SpherePoint::from_angle(double theta) {
  return SpherePoint(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
}

SpherePoint SpherePoint::from_spherical(double phi, double theta) {
  return SpherePoint(Eigen::Vector3d(std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)));
}

double SpherePoint::theta() const { return std::atan2(u_(1), u_(0)); }

double SpherePoint::phi() const {
  if (dim() == 2) return std::numbers::pi / 2;
  return std::atan2(std::hypot(u_(0), u_(1)), u_(2));
}

Eigen::MatrixXd SpherePoint::tangent_basis() const {
  if (dim() == 2) {
    Eigen::MatrixXd e(2, 1);
    e << -u_(1), u_(0);
    return e;
  }
  // Start from the coordinate axis least aligned with u.
  Eigen::Index axis = 0;
  u_.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  a(axis) = 1.0;
  const Eigen::Vector3d u3 = u_;
  Eigen::Vector3d e1 = a - a.dot(u3) * u3;
  e1.normalize();
  const Eigen::Vector3d e2 = u3.cross(e1);
  Eigen::MatrixXd e(3, 2);
  e.col(0) = e1;
  e.col(1) = e2;
  return e;
}

SpherePoint SpherePoint::exp(const Eigen::VectorXd& tangent) const {
  const Eigen::VectorXd v = tangent - tangent.dot(u_) * u_;
  const double n = v.norm();
  if (n == 0.0) return *this;
  return SpherePoint(std::cos(n) * u_ + std::sin(n) * (v / n));
}

Eigen::VectorXd SpherePoint::log(const SpherePoint& other) const {
  const Eigen::VectorXd& w = other.unit();
  const Eigen::VectorXd perp = w - w.dot(u_) * u_;
  const double s = perp.norm();
  if (s == 0.0) return Eigen::VectorXd::Zero(dim());
  const double angle = std::atan2(s, w.dot(u_));
  return (angle / s) * perp;
}

// ---------------------------------------------------------------------------
// RadialEmbedding

struct RadialEmbedding::Impl {
  Family family = Family::Round;
  int dim = 2;
  std::vector<double> params;
  std::vector<double> sin_params;
  std::optional<RadialExpr> expr;
  double min_radius = 1.0;
  double argmin_phi = 0.0;
  double argmin_theta = 0.0;

  AngleJet jet(double phi, double theta) const {
    switch (family) {
      case Family::Round: return AngleJet{1.0, 0.0, 0.0};
      case Family::Ellipse: {
        const double a = params[0];
        const double b = params[1];
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double d = b * b * c * c + a * a * s * s;
        const double r = a * b / std::sqrt(d);
        return AngleJet{r, 0.0, -r * (a * a - b * b) * s * c / d};
      }
      case Family::Trig: {
        AngleJet out{params.empty() ? 0.0 : params[0], 0.0, 0.0};
        for (std::size_t n = 1; n < params.size(); ++n) {
          out.value += params[n] * std::cos(n * theta);
          out.d_theta -= n * params[n] * std::sin(n * theta);
        }
        for (std::size_t n = 1; n <= sin_params.size(); ++n) {
          out.value += sin_params[n - 1] * std::sin(n * theta);
          out.d_theta += n * sin_params[n - 1] * std::cos(n * theta);
        }
        return out;
      }
      case Family::Expression: return expr->jet(phi, theta);
    }
    return {};
  }

  void sample_minimum() {
    min_radius = std::numeric_limits<double>::infinity();
    auto visit = [&](double phi, double theta) {
      const double r = jet(phi, theta).value;
      if (!(r >= min_radius)) {
        min_radius = r;
        argmin_phi = phi;
        argmin_theta = theta;
      }
    };
    const double pi = std::numbers::pi;
    if (dim == 2) {
      for (int i = 0; i < 1024; ++i) visit(pi / 2, -pi + (i + 0.5) * 2 * pi / 1024);
    } else {
      for (int i = 0; i < 90; ++i) {
        for (int j = 0; j < 180; ++j) visit((i + 0.5) * pi / 90, -pi + (j + 0.5) * 2 * pi / 180);
      }
    }
  }
};

namespace {

std::shared_ptr<RadialEmbedding::Impl> make_impl(Family family, int dim) {
  auto impl = std::make_shared<RadialEmbedding::Impl>();
  impl->family = family;
  impl->dim = dim;
  return impl;
}

}  // namespace

RadialEmbedding RadialEmbedding::round(int dim) {
  if (dim != 2 && dim != 3) throw Error(ErrorKind::InvalidArgument, "round sphere needs k = 2 or 3");
  auto impl = make_impl(Family::Round, dim);
  impl->sample_minimum();
  return RadialEmbedding(std::move(impl));
}

RadialEmbedding RadialEmbedding::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "ellipse semi-axes must be positive");
  auto impl = make_impl(Family::Ellipse, 2);
  impl->params = {a, b};
  impl->sample_minimum();
  return RadialEmbedding(std::move(impl));
}

RadialEmbedding RadialEmbedding::trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  if (cos_coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "trig family needs a constant term");
  auto impl = make_impl(Family::Trig, 2);
  impl->params = std::move(cos_coeffs);
  impl->sin_params = std::move(sin_coeffs);
  impl->sample_minimum();
  return RadialEmbedding(std::move(impl));
}

RadialEmbedding RadialEmbedding::expression(RadialExpr expr) {
  auto impl = make_impl(Family::Expression, expr.dim());
  impl->expr = std::move(expr);
  impl->sample_minimum();
  return RadialEmbedding(std::move(impl));
}

RadialEmbedding RadialEmbedding::expression(std::string_view source, int dim) {
  return expression(RadialExpr::parse(source, dim));
}

int RadialEmbedding::dim() const { return impl_->dim; }
Family RadialEmbedding::family() const { return impl_->family; }
const std::vector<double>& RadialEmbedding::parameters() const { return impl_->params; }
const std::vector<double>& RadialEmbedding::sin_parameters() const { return impl_->sin_params; }

double RadialEmbedding::observed_min_radius() const { return (1.0 - t_) + t_ * impl_->min_radius; }

std::string RadialEmbedding::expression_source() const {
  return impl_->expr ? impl_->expr->to_string() : std::string();
}

std::string RadialEmbedding::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (impl_->family) {
    case Family::Round: os << "round(k=" << impl_->dim << ")"; break;
    case Family::Ellipse: os << "ellipse(" << impl_->params[0] << ", " << impl_->params[1] << ")"; break;
    case Family::Trig: {
      os << "trig(cos=[";
      for (std::size_t i = 0; i < impl_->params.size(); ++i) os << (i ? ", " : "") << impl_->params[i];
      os << "], sin=[";
      for (std::size_t i = 0; i < impl_->sin_params.size(); ++i) os << (i ? ", " : "") << impl_->sin_params[i];
      os << "])";
      break;
    }
    case Family::Expression: os << "r = " << impl_->expr->to_string(); break;
  }
  if (t_ != 1.0) os << " at t = " << t_;
  return os.str();
}

AngleJet RadialEmbedding::base_jet(double phi, double theta) const { return impl_->jet(phi, theta); }

void RadialEmbedding::radius_failure(const SpherePoint& u, double r) const {
  std::ostringstream os;
  os.precision(17);
  os << "radius " << r << " at (phi, theta) = (" << u.phi() << ", " << u.theta() << ")";
  if (t_ != 1.0) {
    os << ", t = " << t_;
    throw Error(ErrorKind::PositivityViolation, os.str());
  }
  throw Error(ErrorKind::DegenerateRadius, os.str());
}

double RadialEmbedding::radius(const SpherePoint& u) const {
  if (u.dim() != dim()) throw Error(ErrorKind::InvalidArgument, "sphere point dimension mismatch");
  const double r = (1.0 - t_) + t_ * impl_->jet(u.phi(), u.theta()).value;
  if (!(r > kRadiusFloor)) radius_failure(u, r);
  return r;
}

RadialGradient RadialEmbedding::radius_gradient(const SpherePoint& u) const {
  if (u.dim() != dim()) throw Error(ErrorKind::InvalidArgument, "sphere point dimension mismatch");
  const double phi = u.phi();
  const double theta = u.theta();
  const AngleJet j = impl_->jet(phi, theta);
  RadialGradient out;
  out.radius = (1.0 - t_) + t_ * j.value;
  if (!(out.radius > kRadiusFloor)) radius_failure(u, out.radius);

  if (dim() == 2) {
    out.gradient = (t_ * j.d_theta) * Eigen::Vector2d(-std::sin(theta), std::cos(theta));
    return out;
  }
  const double sp = std::sin(phi);
  if (std::abs(sp) >= kPoleThreshold) {
    const Eigen::Vector3d e_phi(std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), -sp);
    const Eigen::Vector3d e_theta(-std::sin(theta), std::cos(theta), 0.0);
    out.gradient = t_ * (j.d_phi * e_phi + (j.d_theta / sp) * e_theta);
    return out;
  }
  // At a pole the (phi, theta) chart degenerates; differentiate in the
  // tangent chart centered at u instead.
  const Eigen::MatrixXd e = u.tangent_basis();
  out.gradient = Eigen::VectorXd::Zero(3);
  for (Eigen::Index a = 0; a < e.cols(); ++a) {
    const SpherePoint plus = u.exp(kPoleStep * e.col(a));
    const SpherePoint minus = u.exp(-kPoleStep * e.col(a));
    const double rp = impl_->jet(plus.phi(), plus.theta()).value;
    const double rm = impl_->jet(minus.phi(), minus.theta()).value;
    out.gradient += (t_ * (rp - rm) / (2 * kPoleStep)) * e.col(a);
  }
  return out;
}

Eigen::VectorXd RadialEmbedding::eval(const SpherePoint& u) const { return radius(u) * u.unit(); }

TangentFrame RadialEmbedding::tangent_frame(const SpherePoint& u) const {
  const RadialGradient g = radius_gradient(u);
  TangentFrame f;
  f.basis = u.tangent_basis();
  f.derivative = g.radius * f.basis + u.unit() * (g.gradient.transpose() * f.basis);
  return f;
}

RadialEmbedding RadialEmbedding::isotopy(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "isotopy parameter must lie in [0, 1]");
  RadialEmbedding out(impl_, t);
  const double rmin = out.observed_min_radius();
  if (!(rmin > kRadiusFloor)) {
    std::ostringstream os;
    os.precision(17);
    os << "r_t = " << rmin << " at (phi, theta) = (" << impl_->argmin_phi << ", " << impl_->argmin_theta
       << "), t = " << t;
    throw Error(ErrorKind::PositivityViolation, os.str());
  }
  return out;
}

}  // namespace inscribed::spheres
