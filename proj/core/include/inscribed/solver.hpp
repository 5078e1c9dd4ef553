#pragma once

// Root finding for simplices of a fixed similarity class and fixed pose
// inscribed in a radial embedding.
//
// Unknowns: one tangent chart per vertex ((k+1)(k-1) reals), the scale
// lambda and the base vertex c (k reals); k(k+1) in total. Residual blocks:
//   block 0:  gamma(u_0) - c
//   block i:  gamma(u_i) - c - lambda rho_i U pi_{i0}
// so the system is square once the pose U is fixed.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inscribed/radial_embedding.hpp"
#include "inscribed/similarity.hpp"

namespace inscribed::inscribe {

using simspace::Pose;
using simspace::SimilarityClass;
using simspace::SimParams;
using simspace::SimplexConfig;
using spheres::RadialEmbedding;
using spheres::SpherePoint;

struct InscribedState {
  std::vector<SpherePoint> u;
  double lambda = 0.0;
  Eigen::VectorXd center;

  int dim() const { return static_cast<int>(center.size()); }
};

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  double lambda_min = 1e-8;
  double condition_warning = 1e10;
  double min_step = 1.0 / 1024.0;
  bool check_jacobian = false;
  double fd_step = 1e-6;
};

enum class SolveStatus { Converged, MaxIterations, LineSearchStall, Collapse, SingularJacobian, EvaluationFailure };

std::string to_string(SolveStatus status);

struct InscribedSolution {
  InscribedState state;
  SimParams params;
  double residual_norm = 0.0;
  double jacobian_condition = 0.0;
  double t = 1.0;
  int iterations = 0;
  bool near_nontransverse = false;
  /// Max relative entry error of the analytic Jacobian against central
  /// differences, when the cross-check was requested.
  std::optional<double> jacobian_check_error;

  /// Vertices gamma_t(u_i) on the surface.
  Eigen::MatrixXd vertices(const RadialEmbedding& gamma_t) const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIterations;
  std::optional<InscribedSolution> solution;
  InscribedState last_state;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string message;

  bool ok() const { return status == SolveStatus::Converged; }
};

int unknown_count(int k);

Eigen::VectorXd residual(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                         const RadialEmbedding& gamma_t);

/// Analytic Jacobian with respect to the tangent charts centered at the
/// current vertices, lambda and c (in that order).
Eigen::MatrixXd jacobian(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                         const RadialEmbedding& gamma_t);

/// Central differences in the same coordinates as jacobian().
Eigen::MatrixXd jacobian_fd(const InscribedState& x, const Pose& pose, const SimilarityClass& cls,
                            const RadialEmbedding& gamma_t, double h = 1e-6);

/// max_ij |A_ij - B_ij| / max(|A_ij|, 1).
double max_relative_entry_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& reference);

/// Moves every chart coordinate by `delta` (same ordering as jacobian()).
InscribedState apply_step(const InscribedState& x, const Eigen::VectorXd& delta);

/// The rotated reference U p_hat on the unit sphere; exact on the round
/// sphere.
InscribedState initial_guess_round(const Pose& pose, const SimilarityClass& cls);

/// Damped Newton with backtracking on |residual|.
SolveResult newton_solve(const InscribedState& x0, const Pose& pose, const SimilarityClass& cls,
                         const RadialEmbedding& gamma_t, const SolverOptions& options = {});

/// Singular-value condition number of the square Jacobian.
double condition_number(const Eigen::MatrixXd& j);

}  // namespace inscribed::inscribe
