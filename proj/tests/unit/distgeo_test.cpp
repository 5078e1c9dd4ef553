#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "inscribed/distance_geometry.hpp"
#include "inscribed/error.hpp"
#include "support/oracles.hpp"

using namespace inscribed;
using namespace inscribed::distgeo;

namespace {

DistanceSet unit_tetrahedron() { return DistanceSet::from_table(Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4)); }

Eigen::MatrixXd regular_tetrahedron_points() {
  Eigen::MatrixXd p(3, 4);
  p << 1, -1, -1, 1,
       1, -1, 1, -1,
       1, 1, -1, -1;
  return p / std::sqrt(8.0);  // side 1
}

}  // namespace

TEST_CASE("distance table validation") {
  Eigen::MatrixXd t(3, 3);
  t << 0, 1, 2,
       1, 0, 1.5,
       2, 1.5, 0;
  CHECK(DistanceSet::from_table(t).size() == 3);

  Eigen::MatrixXd asym = t;
  asym(0, 1) = 1.1;
  CHECK_THROWS_AS(DistanceSet::from_table(asym), Error);
  Eigen::MatrixXd diag = t;
  diag(2, 2) = 0.5;
  CHECK_THROWS_AS(DistanceSet::from_table(diag), Error);
  Eigen::MatrixXd zero = t;
  zero(0, 2) = zero(2, 0) = 0.0;
  CHECK_THROWS_AS(DistanceSet::from_table(zero), Error);
  CHECK_THROWS_AS(DistanceSet::from_table(Eigen::MatrixXd::Zero(1, 1)), Error);
}

TEST_CASE("cayley-menger determinant values") {
  CHECK(cm_det(DistanceSet::triangle(1, 1, 1)) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(std::abs(cm_det(DistanceSet::triangle(1, 2, 3))) < 1e-12);
  CHECK(cm_det(unit_tetrahedron()) == doctest::Approx(4.0).epsilon(1e-12));

  // factored form -(a+b+c)(a+b-c)(a-b+c)(-a+b+c)
  const double a = 2.0, b = 3.0, c = 4.0;
  CHECK(cm_det(DistanceSet::triangle(a, b, c)) ==
        doctest::Approx(-(a + b + c) * (a + b - c) * (a - b + c) * (-a + b + c)).epsilon(1e-12));

  const std::array<int, 1> one{0};
  CHECK_THROWS_AS(cm_det(unit_tetrahedron(), one), Error);
  const std::array<int, 2> pair{1, 3};
  CHECK(cm_det(unit_tetrahedron(), pair) == doctest::Approx(2.0));
}

TEST_CASE("cayley-menger determinant against cofactor expansion") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(2, 6);
    Eigen::MatrixXd p(5, n);
    for (int j = 0; j < n; ++j) p.col(j) = rng.gaussian(5);
    const Eigen::MatrixXd dist = oracle::pairwise(p);
    const double expected = oracle::laplace_det(oracle::bordered_cm(dist));
    const double scale = std::pow(dist.maxCoeff(), 2 * (n - 1));
    CHECK(std::abs(cm_det(DistanceSet::from_table(dist)) - expected) < 1e-10 * scale);
  }
}

TEST_CASE("constructibility") {
  CHECK(is_constructible(DistanceSet::triangle(1, 1, 1)).constructible);
  const auto flat = is_constructible(DistanceSet::triangle(1, 2, 3));
  CHECK_FALSE(flat.constructible);
  REQUIRE(flat.failures().size() == 1);
  CHECK(flat.failures()[0].subset.size() == 3);
  CHECK_FALSE(is_constructible(DistanceSet::triangle(1, 1, 3)).constructible);

  const auto tet = is_constructible(unit_tetrahedron());
  CHECK(tet.constructible);
  // 6 pairs, 4 triples, 1 full set
  CHECK(tet.subsets.size() == 11);
  for (const auto& s : tet.subsets) {
    CHECK(s.expected_sign == ((s.subset.size() % 2 == 0) ? 1 : -1));
  }

  // four coplanar points: every triangle fine, the full set is flat
  Eigen::MatrixXd square(2, 4);
  square << 0, 1, 1, 0,
            0, 0, 1, 1;
  const auto sq = is_constructible(distances_of(square));
  CHECK_FALSE(sq.constructible);
  REQUIRE(sq.failures().size() == 1);
  CHECK(sq.failures()[0].subset.size() == 4);
}

TEST_CASE("random simplices have the alternating sign pattern") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = rng.integer(1, 4);
    const auto report = is_constructible(distances_of(rng.simplex(k)));
    CHECK(report.constructible);
  }
}

TEST_CASE("volume and heron") {
  CHECK(simplex_volume(DistanceSet::triangle(1, 1, 1)) == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-14));
  CHECK(simplex_volume(unit_tetrahedron()) == doctest::Approx(std::sqrt(2.0) / 12).epsilon(1e-12));
  CHECK(simplex_volume(DistanceSet::triangle(1, 2, 3)) == 0.0);
  CHECK_THROWS_AS(simplex_volume(DistanceSet::triangle(1, 1, 3)), Error);

  CHECK(heron_area(1, 1, 1) == doctest::Approx(0.43301270189221935).epsilon(1e-15));
  CHECK(heron_area(3, 4, 5) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(heron_area(1, 2, 3) == 0.0);
  CHECK_THROWS_AS(heron_area(0, 1, 1), Error);
  CHECK_THROWS_AS(heron_area(1, -1, 1), Error);

  oracle::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = rng.integer(1, 4);
    const Eigen::MatrixXd p = rng.simplex(k);
    const double v = simplex_volume(distances_of(p));
    CHECK(v == doctest::Approx(oracle::gram_volume(p)).epsilon(1e-10));
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    CHECK(v * v * std::pow(2.0, k) * f * f ==
          doctest::Approx(std::abs(cm_det(distances_of(p)))).epsilon(1e-10));
  }
}

TEST_CASE("circumradius and circumcenter") {
  CHECK(circumradius(DistanceSet::triangle(1, 1, 1)) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(circumradius(unit_tetrahedron()) == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-14));
  CHECK(circumradius(DistanceSet::triangle(3, 4, 5)) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK_THROWS_AS(circumradius(DistanceSet::triangle(1, 2, 3)), Error);

  Eigen::MatrixXd on_circle(2, 3);
  const double pi = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const double a = pi / 2 + i * 2 * pi / 3;
    on_circle.col(i) << std::cos(a), std::sin(a);
  }
  auto s = circumcenter(on_circle);
  CHECK(s.center.norm() < 1e-14);
  CHECK(s.radius == doctest::Approx(1.0));

  Eigen::MatrixXd standard(2, 3);
  standard << 0, 1, 0,
              0, 0, 1;
  s = circumcenter(standard);
  CHECK(s.center(0) == doctest::Approx(0.5));
  CHECK(s.center(1) == doctest::Approx(0.5));
  CHECK(s.radius == doctest::Approx(std::sqrt(2.0) / 2));

  CHECK(circumcenter(regular_tetrahedron_points()).radius == doctest::Approx(0.61237243569579452).epsilon(1e-14));

  Eigen::MatrixXd collinear(2, 3);
  collinear << 0, 1, 2,
               0, 1, 2;
  CHECK_THROWS_AS(circumcenter(collinear), Error);

  oracle::Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = rng.integer(2, 4);
    const Eigen::MatrixXd p = rng.simplex(k);
    const auto cs = circumcenter(p);
    CHECK((cs.center - oracle::circumcenter_barycentric(p)).norm() < 1e-9 * cs.radius);
    CHECK(cs.radius == doctest::Approx(circumradius(distances_of(p))).epsilon(1e-9));
    for (int i = 0; i <= k; ++i) CHECK((p.col(i) - cs.center).norm() == doctest::Approx(cs.radius).epsilon(1e-10));
  }
}

TEST_CASE("distances of points") {
  Eigen::MatrixXd p(2, 3);
  p << 0, 1, 0,
       0, 0, 1;
  const auto d = distances_of(p);
  CHECK(d(0, 1) == 1.0);
  CHECK(d(0, 2) == 1.0);
  CHECK(d(1, 2) == doctest::Approx(std::sqrt(2.0)));

  Eigen::MatrixXd twin(2, 2);
  twin << 1, 1,
          2, 2;
  CHECK_THROWS_AS(distances_of(twin), Error);

  oracle::Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = rng.integer(2, 4);
    const Eigen::MatrixXd q = rng.simplex(k);
    // relabeling permutes the table
    std::vector<int> sigma(static_cast<std::size_t>(k + 1));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::reverse(sigma.begin(), sigma.end());
    Eigen::MatrixXd permuted(k, k + 1);
    for (int i = 0; i <= k; ++i) permuted.col(i) = q.col(sigma[i]);
    const auto dq = distances_of(q);
    const auto dp = distances_of(permuted);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) CHECK(dp(i, j) == dq(sigma[i], sigma[j]));

    // similarity: s R q + t scales distances by s
    const double s = rng.uniform(0.1, 10.0);
    const Eigen::MatrixXd moved = (s * rng.orthogonal(k) * q).colwise() + rng.gaussian(k);
    const auto dm = distances_of(moved);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) CHECK(dm(i, j) == doctest::Approx(s * dq(i, j)).epsilon(1e-12));
  }
}
