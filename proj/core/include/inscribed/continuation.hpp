#pragma once

// Continuation of inscribed solutions: along the radial isotopy from the
// round sphere (fixed pose), and along closed paths in the pose group.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inscribed/solver.hpp"

namespace inscribed::inscribe {

struct HomotopyOptions {
  int steps = 20;
  double dt_min = 1e-4;
  /// Largest angular move of any vertex accepted per step.
  double max_chart_step = 0.1;
  SolverOptions newton;
};

struct SweepResult {
  std::vector<InscribedSolution> path;
  bool completed = false;
  double last_good_t = 0.0;
  /// Jacobian condition number at the last good solution.
  double last_condition = 0.0;
  int rejected_steps = 0;
  std::string message;

  const InscribedSolution& endpoint() const { return path.back(); }
};

/// Predictor = previous solution, corrector = newton_solve on gamma_t; the
/// step in t is halved on failure down to dt_min.
SweepResult sweep_homotopy(const Pose& pose, const SimilarityClass& cls, const RadialEmbedding& gamma,
                           const HomotopyOptions& options = {});

/// Closed unit-speed path s -> exp(s K) U_base in O(k), period 2 pi.
class PosePath {
 public:
  /// U(s) = R(s) U_base for k = 2.
  static PosePath planar(const Pose& base);
  /// U(s) = Rot(axis, s) U_base for k = 3.
  static PosePath about_axis(const Pose& base, const Eigen::Vector3d& axis);

  int dim() const { return base_.dim(); }
  const Pose& base() const { return base_; }
  Pose at(double s) const;
  /// dU/ds = K U(s).
  Eigen::MatrixXd derivative(double s) const;

 private:
  PosePath(Pose base, Eigen::MatrixXd generator) : base_(std::move(base)), generator_(std::move(generator)) {}

  Pose base_;
  Eigen::MatrixXd generator_;
};

struct TraceOptions {
  /// Nominal steps per 2 pi of path parameter; sets the largest step.
  int n_steps = 128;
  double max_step = 0.1;
  double min_step = 1e-7;
  /// Give up (open chain) after max_steps_factor * n_steps accepted steps.
  int max_steps_factor = 50;
  double closure_tolerance = 1e-6;
  SolverOptions newton;
};

struct FamilyTrace {
  std::vector<InscribedSolution> solutions;
  /// Lifted path parameter of each solution; the pose is path.at(s).
  std::vector<double> path_params;
  /// Net number of turns of the path parameter around the closed loop (the
  /// pose winding for k = 2).
  int pose_winding = 0;
  /// Net turns of each vertex around the curve (k = 2 only).
  std::vector<int> vertex_winding;
  bool closed = false;
  int arc_steps = 0;
  double closure_error = 0.0;
  std::string message;
};

/// Pseudo-arclength continuation of the solution set over the pose path,
/// with the path parameter as an extra unknown so folds of the pose map are
/// followed. `start` must solve the system at path.at(start_param).
FamilyTrace trace_pose_loop(const SimilarityClass& cls, const RadialEmbedding& gamma, const PosePath& path,
                            const InscribedSolution& start, double start_param, const TraceOptions& options = {});

/// Convenience overload: the start comes from sweep_homotopy at path.at(0).
FamilyTrace trace_pose_loop(const SimilarityClass& cls, const RadialEmbedding& gamma, const PosePath& path,
                            const TraceOptions& options = {}, const HomotopyOptions& homotopy = {});

/// Same-pose comparison: max over vertices of |u_i - v_i|, |lambda - mu| and
/// |c - d|.
double state_distance(const InscribedState& a, const InscribedState& b);

}  // namespace inscribed::inscribe
