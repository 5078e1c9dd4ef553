#include <doctest.h>

#include <cmath>
#include <numbers>

#include "inscribed/error.hpp"
#include "inscribed/loops.hpp"
#include "support/planar_oracle.hpp"

using namespace inscribed;
using namespace inscribed::inscribe;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SimilarityClass triangle_class(bool scalene) {
  Eigen::MatrixXd p(2, 3);
  if (scalene) {
    p << 0, 3, 0,
         0, 0, 4;
  } else {
    p << 0, 1, 0.5,
         0, 0, std::sqrt(3.0) / 2;
  }
  return simspace::normalize_reference(SimplexConfig(p));
}

// Times the traced loops pass through pose angle `a`.
int crossings(const std::vector<FamilyTrace>& loops, double a) {
  int n = 0;
  for (const auto& l : loops) {
    const auto& s = l.path_params;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      const double lo = std::min(s[j], s[j + 1]);
      const double hi = std::max(s[j], s[j + 1]);
      const double x = a + kTwoPi * std::ceil((lo - a) / kTwoPi);
      if (x < hi || (x == hi && j + 2 == s.size())) ++n;
    }
  }
  return n;
}

struct Curve {
  const char* source;
  oracle::RadiusFn radius;
  double r_max;
};

}  // namespace

TEST_CASE("round circle has one loop of degree one") {
  const auto census = find_all_loops(triangle_class(false), RadialEmbedding::round(2));
  REQUIRE(census.loops.size() == 1);
  CHECK(census.loops[0].closed);
  CHECK(degree_sum(census.loops) == 1);
  CHECK(census.failures.empty());
}

TEST_CASE("loop census matches the brute-force census") {
  const std::vector<Curve> curves = {
      {"ellipse", [](double t) { return 1.2 / std::sqrt(std::pow(std::cos(t), 2) + std::pow(1.2 * std::sin(t), 2)); }, 1.2},
      {"1 + 0.3*sin(3*theta)", [](double t) { return 1 + 0.3 * std::sin(3 * t); }, 1.3},
      {"1 + 0.2*sin(2*theta) + 0.1*cos(5*theta)", [](double t) { return 1 + 0.2 * std::sin(2 * t) + 0.1 * std::cos(5 * t); }, 1.3},
  };
  for (bool scalene : {false, true}) {
    const auto cls = triangle_class(scalene);
    const Eigen::MatrixXd w = cls.unit_offsets();
    for (const auto& c : curves) {
      CAPTURE(c.source);
      CAPTURE(scalene);
      const auto gamma = std::string(c.source) == "ellipse" ? RadialEmbedding::ellipse(1.2, 1.0)
                                                            : RadialEmbedding::expression(c.source, 2);
      const auto census = find_all_loops(cls, gamma);
      for (const auto& l : census.loops) CHECK(l.closed);
      CHECK(degree_sum(census.loops) == 1);
      const PosePath path = PosePath::planar(loop_base_pose(false));
      for (int j = 0; j < 12; ++j) {
        const double a = kTwoPi * j / 12 + 0.05;
        const Eigen::MatrixXd u = path.at(a).matrix();
        const auto found = oracle::PlanarCensus(c.radius, u * w.col(0), u * w.col(1), c.r_max, 1024).solve();
        CAPTURE(a);
        CHECK(static_cast<int>(found.size()) == crossings(census.loops, a));
        CHECK(found.size() % 2 == 1);
      }
    }
  }
}

TEST_CASE("census is deterministic for a fixed seed") {
  LoopSearchOptions opts;
  opts.seed = 99;
  opts.threads = 4;
  const auto g = RadialEmbedding::expression("1 + 0.3*sin(3*theta)", 2);
  const auto a = find_all_loops(triangle_class(true), g, opts);
  opts.threads = 1;
  const auto b = find_all_loops(triangle_class(true), g, opts);
  REQUIRE(a.loops.size() == b.loops.size());
  CHECK(a.candidates == b.candidates);
  for (std::size_t i = 0; i < a.loops.size(); ++i) {
    CHECK(a.loops[i].path_params == b.loops[i].path_params);
  }
}

TEST_CASE("degree needs closed traces") {
  FamilyTrace open;
  open.message = "no closure";
  FamilyTrace closed;
  closed.closed = true;
  closed.pose_winding = 1;
  CHECK(degree_sum({closed}) == 1);
  try {
    degree_sum({closed, open});
    FAIL("expected an open-trace error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OpenTrace);
    CHECK(std::string(e.what()).find("trace 1") != std::string::npos);
  }
  CHECK_THROWS_AS(find_all_loops(triangle_class(false), RadialEmbedding::round(3)), Error);
}

TEST_CASE("reflected component also has degree one") {
  LoopSearchOptions opts;
  opts.reflected = true;
  const auto census = find_all_loops(triangle_class(true), RadialEmbedding::ellipse(1.2, 1.0), opts);
  CHECK(degree_sum(census.loops) == 1);
  for (const auto& l : census.loops)
    for (const auto& s : l.solutions) CHECK(s.params.pose.det_sign() == -1);
}

TEST_CASE("quasi-uniform rotations") {
  const auto poses = quasi_uniform_rotations(200);
  REQUIRE(poses.size() == 200);
  Eigen::Matrix3d mean = Eigen::Matrix3d::Zero();
  for (const auto& p : poses) {
    CHECK(p.det_sign() == 1);
    mean += p.matrix() / 200.0;
  }
  // Haar measure has zero mean
  CHECK(mean.norm() < 0.1);
}

TEST_CASE("pose coverage") {
  Eigen::MatrixXd p(3, 4);
  p << 1, -1, -1, 1,
       1, -1, 1, -1,
       1, 1, -1, -1;
  const auto tet = simspace::normalize_reference(SimplexConfig(p));
  CoverageOptions opts;
  const auto round = pose_coverage(tet, RadialEmbedding::round(3), opts);
  CHECK(round.entries.size() == 100);
  CHECK(round.success_fraction() == 1.0);

  opts.samples = 20;
  opts.reflected = true;
  const auto mirrored = pose_coverage(tet, RadialEmbedding::expression("1 + 0.1*cos(2*phi)", 3), opts);
  for (const auto& e : mirrored.entries) CHECK(e.pose.det_sign() == -1);
  CHECK(mirrored.success_fraction() == 1.0);

  opts.reflected = false;
  const auto lobed = pose_coverage(tet, RadialEmbedding::expression("1 + sin(phi)^3*sin(3*theta)/5 - abs(cos(phi))^7", 3), opts);
  CHECK(lobed.success_fraction() >= 0.0);
  for (const auto& e : lobed.entries) {
    if (!e.success) {
      CHECK(e.last_good_t < 1.0);
      CHECK_FALSE(e.message.empty());
    }
  }
  CHECK_THROWS_AS(pose_coverage(triangle_class(false), RadialEmbedding::round(2)), Error);
}
