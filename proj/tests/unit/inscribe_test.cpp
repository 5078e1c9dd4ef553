#include <doctest.h>

#include <cmath>
#include <numbers>

#include "inscribed/continuation.hpp"
#include "inscribed/error.hpp"
#include "support/oracles.hpp"
#include "support/planar_oracle.hpp"

using namespace inscribed;
using namespace inscribed::inscribe;

namespace {

SimilarityClass equilateral_class() {
  Eigen::MatrixXd p(2, 3);
  p << 0, 1, 0.5,
       0, 0, std::sqrt(3.0) / 2;
  return simspace::normalize_reference(SimplexConfig(p));
}

SimilarityClass tetrahedron_class() {
  Eigen::MatrixXd p(3, 4);
  p << 1, -1, -1, 1,
       1, -1, 1, -1,
       1, 1, -1, -1;
  return simspace::normalize_reference(SimplexConfig(p));
}

// Every returned solution is inscribed, similar, and has the requested pose.
void check_solution(const InscribedSolution& s, const SimilarityClass& cls, const RadialEmbedding& gamma,
                    const Pose& pose) {
  const RadialEmbedding g = gamma.isotopy(s.t);
  const Eigen::MatrixXd q = s.vertices(g);
  for (int i = 0; i < q.cols(); ++i) {
    CHECK(std::abs(q.col(i).norm() - g.radius(s.state.u[i])) < 1e-10);
  }
  const SimplexConfig config(q);
  CHECK(simspace::is_similar(config, cls, 1e-8));
  CHECK((simspace::pose(config, cls).matrix() - pose.matrix()).norm() < 1e-7);
  CHECK(s.state.lambda > 0.0);
  const SimplexConfig embedded = simspace::embed(cls, s.params);
  CHECK((embedded.vertices() - q).cwiseAbs().maxCoeff() < 1e-9);
}

InscribedState random_state(oracle::Rng& rng, int k) {
  InscribedState x;
  for (int i = 0; i <= k; ++i) x.u.emplace_back(rng.gaussian(k));
  x.lambda = rng.uniform(0.3, 2.0);
  x.center = 0.5 * rng.gaussian(k);
  return x;
}

}  // namespace

TEST_CASE("round-sphere guess is exact") {
  oracle::Rng rng(41);
  for (int k : {2, 3}) {
    const auto cls = k == 2 ? equilateral_class() : tetrahedron_class();
    const auto sphere = RadialEmbedding::round(k);
    for (int trial = 0; trial < 50; ++trial) {
      const Pose u(rng.orthogonal(k, trial % 2 ? 1 : -1));
      const InscribedState x = initial_guess_round(u, cls);
      CHECK(residual(x, u, cls, sphere).norm() < 1e-12);
      for (int i = 0; i <= k; ++i) {
        CHECK((x.u[i].unit() - u.matrix() * cls.reference().vertex(i)).norm() < 1e-12);
      }
    }
  }
  const auto cls = equilateral_class();
  const InscribedState id = initial_guess_round(Pose::identity(2), cls);
  const InscribedState rot = initial_guess_round(Pose::planar(std::numbers::pi / 3), cls);
  for (int i = 0; i < 3; ++i) {
    CHECK((id.u[i].unit() - cls.reference().vertex(i)).norm() < 1e-15);
    CHECK(rot.u[i].theta() - id.u[i].theta() == doctest::Approx(std::numbers::pi / 3).epsilon(1e-12));
  }
}

TEST_CASE("residual is linear in a scale perturbation") {
  oracle::Rng rng(42);
  for (int k : {2, 3}) {
    const auto cls = normalize_reference(SimplexConfig(rng.simplex(k)));
    const Pose u(rng.orthogonal(k));
    InscribedState x = initial_guess_round(u, cls);
    double rho2 = 0.0;
    for (int i = 1; i <= k; ++i) rho2 += cls.rho(i) * cls.rho(i);
    for (double delta : {1e-6, 1e-3, 0.1}) {
      InscribedState y = x;
      y.lambda += delta;
      CHECK(residual(y, u, cls, RadialEmbedding::round(k)).norm() == doctest::Approx(delta * std::sqrt(rho2)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(SpherePoint(Eigen::Vector2d::Zero()), Error);
  InscribedState short_state = initial_guess_round(Pose::identity(2), equilateral_class());
  short_state.u.pop_back();
  CHECK_THROWS_AS(residual(short_state, Pose::identity(2), equilateral_class(), RadialEmbedding::round(2)), Error);
}

TEST_CASE("analytic jacobian matches central differences") {
  oracle::Rng rng(43);
  const std::vector<RadialEmbedding> curves = {
      RadialEmbedding::ellipse(1.2, 1.0), RadialEmbedding::expression("1 + 0.3*sin(3*theta)", 2)};
  const std::vector<RadialEmbedding> surfaces = {
      RadialEmbedding::expression("1 + sin(phi)^3*sin(3*theta)/5 - abs(cos(phi))^7", 3),
      RadialEmbedding::expression("1 + 0.1*cos(2*phi)", 3)};
  for (int k : {2, 3}) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto cls = normalize_reference(SimplexConfig(rng.simplex(k)));
      const Pose u(rng.orthogonal(k, trial % 2 ? 1 : -1));
      const auto& gamma = k == 2 ? curves[trial % 2] : surfaces[trial % 2];
      InscribedState x = random_state(rng, k);
      if (k == 3) {
        bool near_pole = false;
        for (const auto& p : x.u) near_pole = near_pole || std::abs(p.unit()(2)) > 0.97;
        if (near_pole) continue;
      }
      const Eigen::MatrixXd j = jacobian(x, u, cls, gamma);
      CHECK(j.rows() == unknown_count(k));
      CHECK(j.cols() == unknown_count(k));
      worst = std::max(worst, max_relative_entry_error(j, jacobian_fd(x, u, cls, gamma)));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("newton on the round sphere") {
  oracle::Rng rng(44);
  for (int k : {2, 3}) {
    const auto cls = normalize_reference(SimplexConfig(rng.simplex(k)));
    const auto sphere = RadialEmbedding::round(k);
    for (int trial = 0; trial < 30; ++trial) {
      const Pose u(rng.orthogonal(k));
      const SolveResult r = newton_solve(initial_guess_round(u, cls), u, cls, sphere);
      REQUIRE(r.ok());
      CHECK(r.solution->iterations <= 2);
      check_solution(*r.solution, cls, sphere, u);
      for (int i = 0; i <= k; ++i) {
        CHECK((r.solution->state.u[i].unit() - u.matrix() * cls.reference().vertex(i)).norm() < 1e-9);
      }

      // start away from the solution: converges back to the rigid rotation
      InscribedState x = initial_guess_round(u, cls);
      for (auto& p : x.u) p = p.exp(0.05 * (p.tangent_basis() * rng.gaussian(k - 1)));
      x.lambda *= 1.05;
      const SolveResult back = newton_solve(x, u, cls, sphere);
      REQUIRE(back.ok());
      for (int i = 0; i <= k; ++i) {
        CHECK((back.solution->state.u[i].unit() - u.matrix() * cls.reference().vertex(i)).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("newton failure modes") {
  const auto cls = equilateral_class();
  const auto ell = RadialEmbedding::ellipse(1.2, 1.0);
  SolverOptions opts;
  opts.max_iterations = 1;
  InscribedState x = initial_guess_round(Pose::identity(2), cls);
  x.lambda = 0.5;
  const SolveResult r = newton_solve(x, Pose::identity(2), cls, ell, opts);
  CHECK(r.status == SolveStatus::MaxIterations);
  CHECK_FALSE(r.solution.has_value());
  CHECK(r.residual_norm > 0.0);

  // the scale is driven to zero: configurations collapsing onto a point
  SolverOptions strict;
  strict.lambda_min = 0.9;
  InscribedState small = initial_guess_round(Pose::identity(2), cls);
  small.lambda = 0.95;
  for (auto& p : small.u) p = SpherePoint::from_angle(0.1 * p.theta());
  const SolveResult c = newton_solve(small, Pose::identity(2), cls, ell, strict);
  CHECK_FALSE(c.ok());

  SolverOptions check;
  check.check_jacobian = true;
  const SolveResult ok = newton_solve(initial_guess_round(Pose::identity(2), cls), Pose::identity(2), cls, ell, check);
  REQUIRE(ok.ok());
  REQUIRE(ok.solution->jacobian_check_error.has_value());
  CHECK(*ok.solution->jacobian_check_error < 1e-5);
}

TEST_CASE("ellipse solution agrees with the brute-force census") {
  const auto cls = equilateral_class();
  const auto ell = RadialEmbedding::ellipse(1.2, 1.0);
  const Pose id = Pose::identity(2);
  const SolveResult r = newton_solve(initial_guess_round(id, cls), id, cls, ell);
  REQUIRE(r.ok());
  check_solution(*r.solution, cls, ell, id);

  const oracle::RadiusFn radius = [](double t) {
    return 1.2 / std::sqrt(std::pow(std::cos(t), 2) + std::pow(1.2 * std::sin(t), 2));
  };
  const Eigen::MatrixXd w = cls.unit_offsets();
  const auto found = oracle::PlanarCensus(radius, w.col(0), w.col(1), 1.2).solve();
  REQUIRE(found.size() == 1);
  const Eigen::MatrixXd q = r.solution->vertices(ell);
  CHECK((q.col(0) - found[0].q0).norm() < 1e-6);
  CHECK((q.col(1) - found[0].q1).norm() < 1e-6);
  CHECK((q.col(2) - found[0].q2).norm() < 1e-6);
  // frozen from the census
  CHECK(r.solution->state.lambda == doctest::Approx(1.8738936581196564).epsilon(1e-8));
}

TEST_CASE("homotopy sweep") {
  const auto cls = equilateral_class();
  const auto round = RadialEmbedding::round(2);
  const Pose u = Pose::planar(0.4);
  const SweepResult flat = sweep_homotopy(u, cls, round);
  REQUIRE(flat.completed);
  for (const auto& s : flat.path) CHECK(state_distance(s.state, flat.path.front().state) < 1e-12);

  const auto ell = RadialEmbedding::ellipse(1.2, 1.0);
  const SweepResult sw = sweep_homotopy(u, cls, ell);
  REQUIRE(sw.completed);
  CHECK(sw.endpoint().t == 1.0);
  CHECK(sw.path.front().t == 0.0);
  check_solution(sw.endpoint(), cls, ell, u);
  const SolveResult direct = newton_solve(initial_guess_round(u, cls), u, cls, ell);
  REQUIRE(direct.ok());
  CHECK(state_distance(direct.solution->state, sw.endpoint().state) < 1e-8);

  // positivity is lost along the way: the sweep stops and says where
  const auto bad = RadialEmbedding::expression("1 + 0.9*cos(theta) - 0.95*cos(theta)^2*2", 2);
  const SweepResult broken = sweep_homotopy(u, cls, bad);
  CHECK_FALSE(broken.completed);
  CHECK(broken.last_good_t < 0.4);
  CHECK(broken.message.find("breakdown") != std::string::npos);
}

TEST_CASE("pose loops on the round circle and sphere") {
  const auto cls = equilateral_class();
  const auto circle = RadialEmbedding::round(2);
  const PosePath path = PosePath::planar(Pose::identity(2));
  const FamilyTrace t = trace_pose_loop(cls, circle, path);
  REQUIRE(t.closed);
  CHECK(t.pose_winding == 1);
  CHECK(t.closure_error < 1e-6);
  CHECK(state_distance(t.solutions.front().state, t.solutions.back().state) < 1e-6);
  CHECK(t.path_params.back() - t.path_params.front() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-6));
  REQUIRE(t.vertex_winding.size() == 3);
  for (int w : t.vertex_winding) CHECK(w == 1);
  for (std::size_t i = 0; i < t.solutions.size(); ++i) {
    check_solution(t.solutions[i], cls, circle, path.at(t.path_params[i]));
  }
  for (std::size_t i = 1; i < t.solutions.size(); ++i) {
    CHECK(state_distance(t.solutions[i].state, t.solutions[i - 1].state) < 0.15);
  }

  // reflected component: same winding
  const FamilyTrace m = trace_pose_loop(cls, circle, PosePath::planar(Pose::planar(0.0, true)));
  REQUIRE(m.closed);
  CHECK(m.pose_winding == 1);
  for (const auto& s : m.solutions) CHECK(s.params.pose.det_sign() == -1);

  const auto tet = tetrahedron_class();
  const auto sphere = RadialEmbedding::round(3);
  oracle::Rng rng(45);
  const PosePath spin = PosePath::about_axis(Pose(rng.orthogonal(3)), Eigen::Vector3d(0, 0, 1));
  const FamilyTrace s = trace_pose_loop(tet, sphere, spin);
  REQUIRE(s.closed);
  CHECK(s.pose_winding == 1);
  CHECK(s.closure_error < 1e-6);
}

TEST_CASE("pose loops on perturbed circles") {
  const auto cls = equilateral_class();
  const PosePath path = PosePath::planar(Pose::identity(2));
  for (const char* src : {"1 + 0.3*sin(3*theta)", "1 + 0.2*sin(2*theta) + 0.1*cos(5*theta)"}) {
    const auto g = RadialEmbedding::expression(src, 2);
    TraceOptions coarse;
    coarse.n_steps = 64;
    TraceOptions fine;
    fine.n_steps = 128;
    const FamilyTrace a = trace_pose_loop(cls, g, path, coarse);
    const FamilyTrace b = trace_pose_loop(cls, g, path, fine);
    REQUIRE(a.closed);
    REQUIRE(b.closed);
    CHECK(a.pose_winding == b.pose_winding);
    CHECK(a.closure_error < 1e-6);
    CHECK(b.arc_steps > a.arc_steps);
  }

  // path/class mismatch
  CHECK_THROWS_AS(trace_pose_loop(cls, RadialEmbedding::round(3), path), Error);
  CHECK_THROWS_AS(PosePath::planar(Pose::identity(3)), Error);
  CHECK_THROWS_AS(PosePath::about_axis(Pose::identity(3), Eigen::Vector3d::Zero()), Error);
}
