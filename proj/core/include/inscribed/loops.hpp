#pragma once

// Global views of the solution set: loop census and degree for planar
// curves, sampled pose coverage for surfaces in R^3.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "inscribed/continuation.hpp"

namespace inscribed::inscribe {

struct LoopSearchOptions {
  /// Grid of pose angles 2 pi j / pose_samples + pose_offset.
  int pose_samples = 12;
  double pose_offset = 0.1;
  /// Random restarts per grid pose, on top of the homotopy endpoint.
  int random_restarts = 16;
  std::uint64_t seed = 1;
  /// Search Sim- (poses with det -1) instead of Sim+.
  bool reflected = false;
  double dedup_tolerance = 1e-6;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;
  TraceOptions trace;
  HomotopyOptions homotopy;
};

struct LoopCensus {
  std::vector<FamilyTrace> loops;
  /// Distinct solutions found by the multistart, all assigned to a loop.
  int candidates = 0;
  /// Messages of multistart solves that did not converge.
  std::vector<std::string> failures;
  std::uint64_t seed = 0;
};

/// Base pose of the pose path used by find_all_loops.
Pose loop_base_pose(bool reflected);

/// k = 2 only. Multistart over the pose grid, deduplication, then one
/// pseudo-arclength trace per distinct loop.
LoopCensus find_all_loops(const SimilarityClass& cls, const RadialEmbedding& gamma,
                          const LoopSearchOptions& options = {});

/// Sum of pose windings. Throws Error(OpenTrace) if any trace is open.
int degree_sum(const std::vector<FamilyTrace>& traces);

/// Halton-sequence rotations in SO(3) through the uniform quaternion map.
std::vector<Pose> quasi_uniform_rotations(int n);

struct CoverageOptions {
  int samples = 100;
  /// Compose every sample with diag(1, 1, -1) on the right (det -1 poses).
  bool reflected = false;
  int threads = 0;
  HomotopyOptions homotopy;
};

struct CoverageEntry {
  Pose pose;
  bool success = false;
  double last_good_t = 0.0;
  double condition = 0.0;
  std::string message;
};

struct CoverageReport {
  std::vector<CoverageEntry> entries;
  int successes = 0;

  double success_fraction() const {
    return entries.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(entries.size());
  }
};

/// k = 3 only: sweep_homotopy at every sampled pose.
CoverageReport pose_coverage(const SimilarityClass& cls, const RadialEmbedding& gamma,
                             const CoverageOptions& options = {});

/// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace inscribed::inscribe
