#include "inscribed/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed::inscribe {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxCorrectorIterations = 10;

// A point on the traced curve: solver state plus lifted path parameter.
struct ArcPoint {
  InscribedState state;
  double s = 0.0;
};

// Tangent or difference vector in ambient form: vertex components are
// vectors in R^k (tangent to the sphere for tangents, chords for
// differences), so they can be compared across different charts.
struct ArcVector {
  std::vector<Eigen::VectorXd> du;
  double dl = 0.0;
  Eigen::VectorXd dc;
  double ds = 0.0;
};

double dot(const ArcVector& a, const ArcVector& b) {
  double out = a.dl * b.dl + a.dc.dot(b.dc) + a.ds * b.ds;
  for (std::size_t i = 0; i < a.du.size(); ++i) out += a.du[i].dot(b.du[i]);
  return out;
}

double norm(const ArcVector& a) { return std::sqrt(dot(a, a)); }

ArcVector difference(const ArcPoint& a, const ArcPoint& b) {
  ArcVector d;
  for (std::size_t i = 0; i < a.state.u.size(); ++i) d.du.push_back(a.state.u[i].unit() - b.state.u[i].unit());
  d.dl = a.state.lambda - b.state.lambda;
  d.dc = a.state.center - b.state.center;
  d.ds = a.s - b.s;
  return d;
}

ArcVector axpy(double alpha, const ArcVector& x, const ArcVector& y) {
  ArcVector out = y;
  for (std::size_t i = 0; i < out.du.size(); ++i) out.du[i] += alpha * x.du[i];
  out.dl += alpha * x.dl;
  out.dc += alpha * x.dc;
  out.ds += alpha * x.ds;
  return out;
}

ArcVector negate(const ArcVector& v) { return axpy(-2.0, v, v); }

ArcPoint advance(const ArcPoint& p, const ArcVector& tau, double h) {
  ArcPoint out;
  for (std::size_t i = 0; i < p.state.u.size(); ++i) out.state.u.push_back(p.state.u[i].exp(h * tau.du[i]));
  out.state.lambda = p.state.lambda + h * tau.dl;
  out.state.center = p.state.center + h * tau.dc;
  out.s = p.s + h * tau.ds;
  return out;
}

double max_vertex_move(const InscribedState& a, const InscribedState& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    const double c = std::clamp(a.u[i].unit().dot(b.u[i].unit()), -1.0, 1.0);
    worst = std::max(worst, std::acos(c));
  }
  return worst;
}

class LoopTracer {
 public:
  LoopTracer(const SimilarityClass& cls, const RadialEmbedding& gamma, const PosePath& path,
             const TraceOptions& options)
      : cls_(cls), gamma_(gamma), path_(path), options_(options), k_(cls.dim()), n_(unknown_count(k_)) {}

  Eigen::VectorXd pose_column(const ArcPoint& p) const {
    const Eigen::MatrixXd offsets = path_.derivative(p.s) * cls_.unit_offsets();
    Eigen::VectorXd js = Eigen::VectorXd::Zero(n_);
    for (int i = 1; i <= k_; ++i) js.segment(i * k_, k_) = -p.state.lambda * offsets.col(i - 1);
    return js;
  }

  // Unit null vector of [J | dF/ds], returned in ambient form.
  ArcVector tangent(const ArcPoint& p, double* condition, double* orientation = nullptr) const {
    Eigen::MatrixXd a(n_, n_ + 1);
    const Eigen::MatrixXd j = jacobian(p.state, path_.at(p.s), cls_, gamma_);
    a.leftCols(n_) = j;
    a.col(n_) = pose_column(p);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd t = svd.matrixV().col(n_);
    if (condition != nullptr) *condition = condition_number(j);
    if (orientation != nullptr) {
      Eigen::MatrixXd bordered(n_ + 1, n_ + 1);
      bordered.topRows(n_) = a;
      bordered.row(n_) = t.transpose();
      *orientation = bordered.determinant();
    }
    ArcVector tau;
    for (int i = 0; i <= k_; ++i) {
      tau.du.push_back(p.state.u[i].tangent_basis() * t.segment(i * (k_ - 1), k_ - 1));
    }
    const int lc = (k_ + 1) * (k_ - 1);
    tau.dl = t(lc);
    tau.dc = t.segment(lc + 1, k_);
    tau.ds = t(n_);
    return tau;
  }

  // Newton on F = 0 together with <tau, y - anchor> = 0.
  bool correct(ArcPoint& y, const ArcPoint& anchor, const ArcVector& tau, int* iterations) const {
    for (int it = 0; it <= kMaxCorrectorIterations; ++it) {
      Eigen::VectorXd f;
      try {
        f = residual(y.state, path_.at(y.s), cls_, gamma_);
      } catch (const Error&) {
        return false;
      }
      const double g = dot(tau, difference(y, anchor));
      const double scale = 1.0 + y.state.center.norm() + std::abs(y.state.lambda);
      if (f.norm() < options_.newton.tolerance * scale && std::abs(g) < 1e-11 * scale) {
        *iterations = it;
        return true;
      }
      if (it == kMaxCorrectorIterations) break;
      Eigen::MatrixXd m(n_ + 1, n_ + 1);
      m.topLeftCorner(n_, n_) = jacobian(y.state, path_.at(y.s), cls_, gamma_);
      m.topRightCorner(n_, 1) = pose_column(y);
      for (int i = 0; i <= k_; ++i) {
        m.block(n_, i * (k_ - 1), 1, k_ - 1) = (y.state.u[i].tangent_basis().transpose() * tau.du[i]).transpose();
      }
      const int lc = (k_ + 1) * (k_ - 1);
      m(n_, lc) = tau.dl;
      m.block(n_, lc + 1, 1, k_) = tau.dc.transpose();
      m(n_, n_) = tau.ds;
      Eigen::VectorXd rhs(n_ + 1);
      rhs.head(n_) = -f;
      rhs(n_) = -g;
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (lu.rank() < n_ + 1) return false;
      const Eigen::VectorXd delta = lu.solve(rhs);
      if (delta.head((k_ + 1) * (k_ - 1)).cwiseAbs().maxCoeff() > 0.5) return false;
      y.state = apply_step(y.state, delta.head(n_));
      y.s += delta(n_);
      if (y.state.lambda < options_.newton.lambda_min) return false;
    }
    return false;
  }

  InscribedSolution make_solution(const ArcPoint& p, double condition, int iterations) const {
    const Pose u = path_.at(p.s);
    const double res = residual(p.state, u, cls_, gamma_).norm();
    InscribedSolution sol{p.state, SimParams{u, p.state.lambda, p.state.center}, res, condition, gamma_.time(),
                          iterations, false, std::nullopt};
    sol.near_nontransverse = condition > options_.newton.condition_warning;
    return sol;
  }

  FamilyTrace run(const InscribedSolution& start_solution, double s0) {
    FamilyTrace trace;
    const ArcPoint start{start_solution.state, s0};
    const double h_max = std::min(options_.max_step, kTwoPi / std::max(1, options_.n_steps));
    const int max_steps = options_.max_steps_factor * std::max(1, options_.n_steps);
    double h = h_max;

    double condition = 0.0;
    double orientation = 0.0;
    ArcVector tau = tangent(start, &condition, &orientation);
    // For k = 2 the charts are oriented continuously over the circle, so the
    // bordered determinant orients every loop the same way and windings of
    // different loops can be summed. The sign convention makes the round
    // circle wind +1 in both components. For k = 3 follow increasing s.
    const double convention = path_.base().det_sign() > 0 ? -1.0 : 1.0;
    if (k_ == 2 ? convention * orientation < 0.0 : tau.ds < 0.0) tau = negate(tau);
    trace.solutions.push_back(make_solution(start, condition, 0));
    trace.path_params.push_back(s0);

    std::vector<double> vertex_turns(static_cast<std::size_t>(k_ + 1), 0.0);
    ArcPoint cur = start;
    int steps = 0;
    while (steps < max_steps) {
      ArcPoint y = advance(cur, tau, h);
      const ArcPoint pred = y;
      int iterations = 0;
      bool ok = correct(y, pred, tau, &iterations);
      if (ok && max_vertex_move(cur.state, y.state) > 1.5 * options_.max_step) ok = false;
      if (!ok) {
        h *= 0.5;
        if (h < options_.min_step) {
          std::ostringstream os;
          os << "continuation breakdown at s = " << cur.s << " (step below " << options_.min_step << ")";
          trace.message = os.str();
          break;
        }
        continue;
      }
      ArcVector next_tau = tangent(y, &condition);
      if (dot(next_tau, tau) < 0.0) next_tau = negate(next_tau);

      if (steps >= 1 && try_close(trace, start, cur, tau, y, next_tau)) {
        accumulate_turns(vertex_turns, cur.state, trace.solutions.back().state);
        ++steps;
        break;
      }

      accumulate_turns(vertex_turns, cur.state, y.state);
      trace.solutions.push_back(make_solution(y, condition, iterations));
      trace.path_params.push_back(y.s);
      cur = std::move(y);
      tau = std::move(next_tau);
      ++steps;
      if (iterations <= 2) h = std::min(1.5 * h, h_max);
      else if (iterations >= 5) h *= 0.7;
    }
    trace.arc_steps = steps;
    if (!trace.closed && trace.message.empty()) {
      trace.message = "no closure within " + std::to_string(max_steps) + " steps";
    }
    if (k_ == 2) {
      for (double turns : vertex_turns) trace.vertex_winding.push_back(static_cast<int>(std::lround(turns / kTwoPi)));
    }
    return trace;
  }

 private:
  // Closure test for the step cur -> y: the lifted start must lie between
  // them along the direction of travel and close to the chord.
  bool try_close(FamilyTrace& trace, const ArcPoint& start, const ArcPoint& cur, const ArcVector& tau,
                 const ArcPoint& y, const ArcVector& next_tau) const {
    const double m = std::round((y.s - start.s) / kTwoPi);
    const ArcPoint lifted{start.state, start.s + kTwoPi * m};
    const ArcVector to_start = difference(lifted, cur);
    if (dot(to_start, tau) < 0.0) return false;
    if (dot(difference(lifted, y), next_tau) > 0.0) return false;
    const ArcVector chord = difference(y, cur);
    const double len2 = dot(chord, chord);
    const double proj = std::clamp(dot(to_start, chord) / len2, 0.0, 1.0);
    const double perp = norm(axpy(-proj, chord, to_start));
    if (perp > 0.25 * std::sqrt(len2) + 1e-9) return false;

    // Land on the hyperplane through the lifted start and compare.
    ArcPoint close = advance(cur, tau, dot(to_start, tau));
    int iterations = 0;
    if (!correct(close, lifted, tau, &iterations)) return false;
    const double error = std::max(state_distance(close.state, lifted.state), std::abs(close.s - lifted.s));
    if (error > options_.closure_tolerance) return false;

    double condition = 0.0;
    tangent(close, &condition);
    trace.solutions.push_back(make_solution(close, condition, iterations));
    trace.path_params.push_back(close.s);
    trace.closed = true;
    trace.closure_error = error;
    trace.pose_winding = static_cast<int>(m);
    return true;
  }

  void accumulate_turns(std::vector<double>& turns, const InscribedState& a, const InscribedState& b) const {
    if (k_ != 2) return;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      const Eigen::VectorXd& p = a.u[i].unit();
      const Eigen::VectorXd& q = b.u[i].unit();
      turns[i] += std::atan2(p(0) * q(1) - p(1) * q(0), p.dot(q));
    }
  }

  const SimilarityClass& cls_;
  const RadialEmbedding& gamma_;
  const PosePath& path_;
  const TraceOptions& options_;
  int k_;
  int n_;
};

}  // namespace

SweepResult sweep_homotopy(const Pose& pose, const SimilarityClass& cls, const RadialEmbedding& gamma,
                           const HomotopyOptions& options) {
  SweepResult out;
  const SolveResult first = newton_solve(initial_guess_round(pose, cls), pose, cls, gamma.isotopy(0.0), options.newton);
  if (!first.ok()) {
    out.message = "no solution on the round sphere: " + first.message;
    return out;
  }
  out.path.push_back(*first.solution);
  out.last_condition = first.solution->jacobian_condition;

  const double dt_nominal = 1.0 / std::max(1, options.steps);
  double dt = dt_nominal;
  double t = 0.0;
  std::string last_failure;
  while (t < 1.0) {
    const double t_next = std::min(1.0, t + dt);
    bool ok = false;
    try {
      const RadialEmbedding g = gamma.isotopy(t_next);
      SolveResult r = newton_solve(out.path.back().state, pose, cls, g, options.newton);
      if (r.ok()) {
        if (max_vertex_move(out.path.back().state, r.solution->state) <= options.max_chart_step) {
          out.path.push_back(std::move(*r.solution));
          ok = true;
        } else {
          last_failure = "corrector jumped farther than the chart step bound";
        }
      } else {
        last_failure = r.message;
      }
    } catch (const Error& e) {
      last_failure = e.what();
    }
    if (ok) {
      t = t_next;
      out.last_condition = out.path.back().jacobian_condition;
      dt = std::min(2.0 * dt, dt_nominal);
      continue;
    }
    ++out.rejected_steps;
    dt *= 0.5;
    if (dt < options.dt_min) {
      std::ostringstream os;
      os << "continuation breakdown after t = " << t << " (condition " << out.last_condition
         << "); last failure: " << last_failure;
      out.message = os.str();
      break;
    }
  }
  out.last_good_t = t;
  out.completed = t >= 1.0;
  return out;
}

PosePath PosePath::planar(const Pose& base) {
  if (base.dim() != 2) throw Error(ErrorKind::InvalidArgument, "planar pose path needs k = 2");
  Eigen::Matrix2d k;
  k << 0, -1,
       1, 0;
  return PosePath(base, k);
}

PosePath PosePath::about_axis(const Pose& base, const Eigen::Vector3d& axis) {
  if (base.dim() != 3) throw Error(ErrorKind::InvalidArgument, "axis pose path needs k = 3");
  const double n = axis.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "rotation axis must be nonzero");
  const Eigen::Vector3d a = axis / n;
  Eigen::Matrix3d k;
  k << 0, -a(2), a(1),
       a(2), 0, -a(0),
       -a(1), a(0), 0;
  return PosePath(base, k);
}

Pose PosePath::at(double s) const {
  Eigen::MatrixXd rot;
  if (dim() == 2) {
    rot = simspace::Pose::planar(s).matrix();
  } else {
    const Eigen::Vector3d axis(generator_(2, 1), generator_(0, 2), generator_(1, 0));
    rot = simspace::axis_rotation(axis, s);
  }
  Eigen::MatrixXd u = rot * base_.matrix();
  simspace::orthonormalize_columns(u);
  return Pose(std::move(u));
}

Eigen::MatrixXd PosePath::derivative(double s) const { return generator_ * at(s).matrix(); }

double state_distance(const InscribedState& a, const InscribedState& b) {
  double worst = std::max(std::abs(a.lambda - b.lambda), (a.center - b.center).cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < a.u.size(); ++i) worst = std::max(worst, (a.u[i].unit() - b.u[i].unit()).norm());
  return worst;
}

FamilyTrace trace_pose_loop(const SimilarityClass& cls, const RadialEmbedding& gamma, const PosePath& path,
                            const InscribedSolution& start, double start_param, const TraceOptions& options) {
  if (path.dim() != cls.dim() || gamma.dim() != cls.dim()) {
    throw Error(ErrorKind::InvalidArgument, "pose path, class and embedding dimensions disagree");
  }
  const double mismatch = (start.params.pose.matrix() - path.at(start_param).matrix()).norm();
  if (mismatch > 1e-7) {
    throw Error(ErrorKind::InvalidArgument, "start solution pose does not match the pose path");
  }
  LoopTracer tracer(cls, gamma, path, options);
  return tracer.run(start, start_param);
}

FamilyTrace trace_pose_loop(const SimilarityClass& cls, const RadialEmbedding& gamma, const PosePath& path,
                            const TraceOptions& options, const HomotopyOptions& homotopy) {
  const SweepResult sweep = sweep_homotopy(path.at(0.0), cls, gamma, homotopy);
  if (!sweep.completed) {
    FamilyTrace trace;
    trace.message = "no start solution: " + sweep.message;
    return trace;
  }
  return trace_pose_loop(cls, gamma, path, sweep.endpoint(), 0.0, options);
}

}  // namespace inscribed::inscribe
