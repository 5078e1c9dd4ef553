#include "inscribed/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "inscribed/error.hpp"

namespace inscribed::inscribe {
namespace {

// Largest chart displacement (radians) a single Newton update may take.
constexpr double kMaxChartStep = 0.5;

void check_shape(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                 const RadialEmbedding& gamma) {
  const int k = cls.dim();
  if (pose.dim() != k || gamma.dim() != k || x.center.size() != k ||
      static_cast<int>(x.u.size()) != k + 1) {
    throw Error(ErrorKind::InvalidArgument, "state, pose, class and embedding dimensions disagree");
  }
  for (const auto& u : x.u) {
    if (u.dim() != k) throw Error(ErrorKind::InvalidArgument, "sphere point dimension mismatch");
  }
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::LineSearchStall: return "line-search-stall";
    case SolveStatus::Collapse: return "collapse";
    case SolveStatus::SingularJacobian: return "singular-jacobian";
    case SolveStatus::EvaluationFailure: return "evaluation-failure";
  }
  return "unknown";
}

Eigen::MatrixXd InscribedSolution::vertices(const RadialEmbedding& gamma_t) const {
  const int k = state.dim();
  Eigen::MatrixXd q(k, k + 1);
  for (int i = 0; i <= k; ++i) q.col(i) = gamma_t.eval(state.u[i]);
  return q;
}

int unknown_count(int k) { return k * (k + 1); }

Eigen::VectorXd residual(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                         const RadialEmbedding& gamma_t) {
  check_shape(x, pose, cls, gamma_t);
  const int k = cls.dim();
  const Eigen::MatrixXd offsets = pose.matrix() * cls.unit_offsets();
  Eigen::VectorXd f(unknown_count(k));
  f.segment(0, k) = gamma_t.eval(x.u[0]) - x.center;
  for (int i = 1; i <= k; ++i) {
    f.segment(i * k, k) = gamma_t.eval(x.u[i]) - x.center - x.lambda * offsets.col(i - 1);
  }
  return f;
}

Eigen::MatrixXd jacobian(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                         const RadialEmbedding& gamma_t) {
  check_shape(x, pose, cls, gamma_t);
  const int k = cls.dim();
  const int n = unknown_count(k);
  const int lambda_col = (k + 1) * (k - 1);
  const Eigen::MatrixXd offsets = pose.matrix() * cls.unit_offsets();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i <= k; ++i) {
    j.block(i * k, i * (k - 1), k, k - 1) = gamma_t.tangent_frame(x.u[i]).derivative;
    if (i > 0) j.block(i * k, lambda_col, k, 1) = -offsets.col(i - 1);
    j.block(i * k, lambda_col + 1, k, k) = -Eigen::MatrixXd::Identity(k, k);
  }
  return j;
}

InscribedState apply_step(const InscribedState& x, const Eigen::VectorXd& delta) {
  const int k = x.dim();
  InscribedState out;
  out.u.reserve(x.u.size());
  for (int i = 0; i <= k; ++i) out.u.push_back(x.u[i].chart_point(delta.segment(i * (k - 1), k - 1)));
  const int lambda_col = (k + 1) * (k - 1);
  out.lambda = x.lambda + delta(lambda_col);
  out.center = x.center + delta.segment(lambda_col + 1, k);
  return out;
}

Eigen::MatrixXd jacobian_fd(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                            const RadialEmbedding& gamma_t, double h) {
  const int n = unknown_count(cls.dim());
  Eigen::MatrixXd j(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    e(c) = h;
    const Eigen::VectorXd fp = residual(apply_step(x, e), pose, cls, gamma_t);
    e(c) = -h;
    const Eigen::VectorXd fm = residual(apply_step(x, e), pose, cls, gamma_t);
    e(c) = 0.0;
    j.col(c) = (fp - fm) / (2 * h);
  }
  return j;
}

double max_relative_entry_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& reference) {
  return ((analytic - reference).cwiseAbs().array() / analytic.cwiseAbs().array().max(1.0)).maxCoeff();
}

InscribedState initial_guess_round(const Pose& pose, const SimilarityClass& cls) {
  const Eigen::MatrixXd rotated = pose.matrix() * cls.reference().vertices();
  InscribedState x;
  for (Eigen::Index i = 0; i < rotated.cols(); ++i) x.u.emplace_back(rotated.col(i));
  x.lambda = cls.base_edge();
  x.center = rotated.col(0);
  return x;
}

double condition_number(const Eigen::MatrixXd& j) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

SolveResult newton_solve(const InscribedState& x0, const Pose& pose, const SimilarityClass& cls,
                         const RadialEmbedding& gamma_t, const SolverOptions& options) {
  SolveResult result;
  result.last_state = x0;
  const int k = cls.dim();
  const int n = unknown_count(k);
  const int chart_count = (k + 1) * (k - 1);

  Eigen::VectorXd f;
  try {
    f = residual(x0, pose, cls, gamma_t);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    result.status = SolveStatus::EvaluationFailure;
    result.message = e.what();
    return result;
  }
  InscribedState x = x0;

  for (int iter = 0;; ++iter) {
    const double norm = f.norm();
    result.residual_norm = norm;
    result.iterations = iter;
    result.last_state = x;
    if (norm < options.tolerance * (1.0 + x.center.norm() + std::abs(x.lambda))) {
      const Eigen::MatrixXd j = jacobian(x, pose, cls, gamma_t);
      InscribedSolution sol{x, SimParams{pose, x.lambda, x.center}, norm, condition_number(j), gamma_t.time(), iter,
                          false, std::nullopt};
      sol.near_nontransverse = sol.jacobian_condition > options.condition_warning;
      if (options.check_jacobian) {
        sol.jacobian_check_error = max_relative_entry_error(j, jacobian_fd(x, pose, cls, gamma_t, options.fd_step));
      }
      result.status = SolveStatus::Converged;
      result.solution = std::move(sol);
      return result;
    }
    if (iter >= options.max_iterations) {
      result.status = SolveStatus::MaxIterations;
      result.message = "no convergence within the iteration limit";
      return result;
    }

    const Eigen::MatrixXd j = jacobian(x, pose, cls, gamma_t);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
    if (lu.rank() < n) {
      result.status = SolveStatus::SingularJacobian;
      result.message = "Jacobian is singular";
      return result;
    }
    const Eigen::VectorXd delta = lu.solve(-f);
    const double chart_move = delta.head(chart_count).cwiseAbs().maxCoeff();
    double alpha = chart_move > kMaxChartStep ? kMaxChartStep / chart_move : 1.0;

    bool accepted = false;
    bool lambda_blocked = false;
    InscribedState trial;
    Eigen::VectorXd ft;
    for (; alpha >= options.min_step; alpha *= 0.5) {
      trial = apply_step(x, alpha * delta);
      if (trial.lambda < options.lambda_min) {
        lambda_blocked = true;
        continue;
      }
      try {
        ft = residual(trial, pose, cls, gamma_t);
      } catch (const Error&) {
        continue;
      }
      if (ft.norm() <= (1.0 - 1e-4 * alpha) * norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      if (lambda_blocked) {
        result.status = SolveStatus::Collapse;
        os << "scale driven below lambda_min = " << options.lambda_min << " (collision face)";
      } else {
        result.status = SolveStatus::LineSearchStall;
        os << "line search stalled at residual " << norm;
      }
      result.message = os.str();
      return result;
    }
    x = std::move(trial);
    f = std::move(ft);
  }
}

}  // namespace inscribed::inscribe
