#include "inscribed/loops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <mutex>
#include <thread>

#include "inscribed/error.hpp"

namespace inscribed::inscribe {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Candidate {
  double angle = 0.0;
  InscribedSolution solution;
};

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

std::optional<InscribedState> random_start(const Pose& pose, const SimilarityClass& cls,
                                           const RadialEmbedding& gamma, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const Eigen::MatrixXd offsets = pose.matrix() * cls.unit_offsets();
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Eigen::VectorXd c = gamma.eval(SpherePoint::from_angle(angle(rng)));
    const double lambda = (gamma.eval(SpherePoint::from_angle(angle(rng))) - c).norm();
    if (lambda < 1e-3) continue;
    InscribedState x;
    x.center = c;
    x.lambda = lambda;
    x.u.emplace_back(c);
    bool ok = true;
    for (int i = 0; i < offsets.cols(); ++i) {
      const Eigen::VectorXd q = c + lambda * offsets.col(i);
      if (q.norm() < 1e-9) {
        ok = false;
        break;
      }
      x.u.emplace_back(q);
    }
    if (ok) return x;
  }
  return std::nullopt;
}

double dedup_scale(const InscribedState& x) { return 1.0 + x.center.norm() + x.lambda; }

bool same_solution(const InscribedState& a, const InscribedState& b, double tol) {
  return state_distance(a, b) < tol * dedup_scale(a);
}

// Does the traced loop pass through `cand`? Look for trace points whose
// lifted path parameter brackets the candidate's angle and solve from the
// nearer one at the candidate's pose.
bool on_loop(const FamilyTrace& loop, const Candidate& cand, const PosePath& path, const SimilarityClass& cls,
             const RadialEmbedding& gamma, const LoopSearchOptions& options) {
  const auto& s = loop.path_params;
  const Pose pose = path.at(cand.angle);
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double lo = std::min(s[j], s[j + 1]);
    const double hi = std::max(s[j], s[j + 1]);
    const double lifted = cand.angle + kTwoPi * std::floor((lo - cand.angle) / kTwoPi);
    const double target = lifted < lo ? lifted + kTwoPi : lifted;
    if (target > hi + 1e-12) continue;
    const std::size_t near = std::abs(target - s[j]) <= std::abs(s[j + 1] - target) ? j : j + 1;
    if (same_solution(loop.solutions[near].state, cand.solution.state, 0.2)) {
      const SolveResult r = newton_solve(loop.solutions[near].state, pose, cls, gamma, options.trace.newton);
      if (r.ok() && same_solution(r.solution->state, cand.solution.state, options.dedup_tolerance)) return true;
    }
  }
  return false;
}

}  // namespace

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

Pose loop_base_pose(bool reflected) { return Pose::planar(0.0, reflected); }

LoopCensus find_all_loops(const SimilarityClass& cls, const RadialEmbedding& gamma,
                          const LoopSearchOptions& options) {
  if (cls.dim() != 2 || gamma.dim() != 2) {
    throw Error(ErrorKind::InvalidArgument, "loop search is defined for planar curves only");
  }
  if (options.pose_samples < 1) throw Error(ErrorKind::InvalidArgument, "pose_samples must be positive");
  const PosePath path = PosePath::planar(loop_base_pose(options.reflected));
  const int per_pose = 1 + std::max(0, options.random_restarts);
  const int total = options.pose_samples * per_pose;

  // Slot i holds start i; filled independently, merged in index order.
  std::vector<std::optional<Candidate>> found(static_cast<std::size_t>(total));
  std::vector<std::string> errors(static_cast<std::size_t>(total));
  parallel_for(total, options.threads, [&](int i) {
    const int j = i / per_pose;
    const int restart = i % per_pose;
    const double angle = wrap_angle(kTwoPi * j / options.pose_samples + options.pose_offset);
    const Pose pose = path.at(angle);
    try {
      if (restart == 0) {
        const SweepResult sweep = sweep_homotopy(pose, cls, gamma, options.homotopy);
        if (sweep.completed) {
          found[i] = Candidate{angle, sweep.endpoint()};
        } else {
          errors[i] = sweep.message;
        }
        return;
      }
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(restart)};
      std::mt19937_64 rng(seq);
      const auto x0 = random_start(pose, cls, gamma, rng);
      if (!x0) return;
      const SolveResult r = newton_solve(*x0, pose, cls, gamma, options.trace.newton);
      if (r.ok()) {
        found[i] = Candidate{angle, *r.solution};
      }
      // Non-converged random restarts are expected and not reported.
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  LoopCensus census;
  census.seed = options.seed;
  std::vector<Candidate> distinct;
  for (int i = 0; i < total; ++i) {
    if (!errors[i].empty()) census.failures.push_back(errors[i]);
    if (!found[i]) continue;
    const bool dup = std::any_of(distinct.begin(), distinct.end(), [&](const Candidate& c) {
      return std::abs(c.angle - found[i]->angle) < 1e-12 &&
             same_solution(c.solution.state, found[i]->solution.state, options.dedup_tolerance);
    });
    if (!dup) distinct.push_back(std::move(*found[i]));
  }
  census.candidates = static_cast<int>(distinct.size());

  for (const Candidate& cand : distinct) {
    const bool known = std::any_of(census.loops.begin(), census.loops.end(), [&](const FamilyTrace& loop) {
      return on_loop(loop, cand, path, cls, gamma, options);
    });
    if (known) continue;
    census.loops.push_back(trace_pose_loop(cls, gamma, path, cand.solution, cand.angle, options.trace));
  }
  return census;
}

int degree_sum(const std::vector<FamilyTrace>& traces) {
  int sum = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!traces[i].closed) {
      throw Error(ErrorKind::OpenTrace,
                  "trace " + std::to_string(i) + " did not close: " + traces[i].message);
    }
    sum += traces[i].pose_winding;
  }
  return sum;
}

std::vector<Pose> quasi_uniform_rotations(int n) {
  const auto halton = [](int index, int base) {
    double f = 1.0;
    double r = 0.0;
    for (int i = index; i > 0; i /= base) {
      f /= base;
      r += f * (i % base);
    }
    return r;
  };
  std::vector<Pose> out;
  out.reserve(static_cast<std::size_t>(std::max(0, n)));
  for (int i = 1; i <= n; ++i) {
    const double u1 = halton(i, 2);
    const double u2 = halton(i, 3);
    const double u3 = halton(i, 5);
    const double a = std::sqrt(1.0 - u1);
    const double b = std::sqrt(u1);
    const Eigen::Quaterniond q(b * std::cos(kTwoPi * u3), a * std::sin(kTwoPi * u2), a * std::cos(kTwoPi * u2),
                               b * std::sin(kTwoPi * u3));
    Eigen::MatrixXd m = q.normalized().toRotationMatrix();
    simspace::orthonormalize_columns(m);
    out.emplace_back(std::move(m));
  }
  return out;
}

CoverageReport pose_coverage(const SimilarityClass& cls, const RadialEmbedding& gamma,
                             const CoverageOptions& options) {
  if (cls.dim() != 3 || gamma.dim() != 3) {
    throw Error(ErrorKind::InvalidArgument, "pose coverage is defined for surfaces in R^3 only");
  }
  std::vector<Pose> poses = quasi_uniform_rotations(options.samples);
  if (options.reflected) {
    for (Pose& p : poses) {
      Eigen::MatrixXd m = p.matrix();
      m.col(2) *= -1.0;
      p = Pose(std::move(m));
    }
  }
  CoverageReport report;
  for (const Pose& p : poses) report.entries.push_back(CoverageEntry{p, false, 0.0, 0.0, {}});
  parallel_for(static_cast<int>(poses.size()), options.threads, [&](int i) {
    CoverageEntry& e = report.entries[i];
    try {
      const SweepResult sweep = sweep_homotopy(e.pose, cls, gamma, options.homotopy);
      e.success = sweep.completed;
      e.last_good_t = sweep.last_good_t;
      e.condition = sweep.last_condition;
      e.message = sweep.message;
    } catch (const Error& err) {
      e.message = err.what();
    }
  });
  report.successes = static_cast<int>(
      std::count_if(report.entries.begin(), report.entries.end(), [](const CoverageEntry& e) { return e.success; }));
  return report;
}

}  // namespace inscribed::inscribe
