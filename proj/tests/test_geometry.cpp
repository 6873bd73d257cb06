#include <doctest.h>

#include <cmath>

#include "rpgo/geometry.hpp"
#include "rpgo/rng.hpp"

using namespace rpgo;

TEST_CASE("rot_from_angle basic values") {
  CHECK((rot_from_angle(0.0).matrix() - Mat2::Identity()).norm() == doctest::Approx(0.0));
  Mat2 quarter;
  quarter << 0, -1, 1, 0;
  CHECK((rot_from_angle(kPi / 2).matrix() - quarter).norm() < 1e-15);
  Mat2 half;
  half << -1, 0, 0, -1;
  CHECK((rot_from_angle(kPi).matrix() - half).norm() < 1e-15);
  CHECK_THROWS_AS(rot_from_angle(std::nan("")), std::invalid_argument);
}

TEST_CASE("angle_from_rot inverts rot_from_angle with wrapping") {
  CHECK(angle_from_rot(Rotation2()) == doctest::Approx(0.0));
  CHECK(angle_from_rot(rot_from_angle(kPi / 2)) == doctest::Approx(kPi / 2));
  CHECK(angle_from_rot(rot_from_angle(-3.0 * kPi / 2)) == doctest::Approx(kPi / 2));
  // round trip over a grid
  for (int k = -300; k <= 300; ++k) {
    const double theta = k * 0.021;
    const Rotation2 r = rot_from_angle(theta);
    CHECK((rot_from_angle(angle_from_rot(r)).matrix() - r.matrix()).norm() < 1e-10);
  }
  // domain boundary: angle is in (-pi, pi]
  CHECK(angle_from_rot(rot_from_angle(kPi)) == doctest::Approx(kPi));
}

TEST_CASE("Rotation2::from_matrix rejects invalid input") {
  Mat2 bad;
  bad << 1, 0, 0, 2;
  CHECK_THROWS_AS(Rotation2::from_matrix(bad), std::invalid_argument);
  Mat2 reflection;
  reflection << 1, 0, 0, -1;  // orthogonal but det = -1
  CHECK_THROWS_AS(Rotation2::from_matrix(reflection), std::invalid_argument);
  CHECK_NOTHROW(Rotation2::from_matrix(rot_from_angle(0.73).matrix()));
}

TEST_CASE("project_to_so2 trivial cases") {
  CHECK((project_to_so2(2.0 * Mat2::Identity()).matrix() - Mat2::Identity()).norm() < 1e-14);
  Mat2 scaled;
  scaled << 0, -2, 2, 0;
  CHECK((project_to_so2(scaled).matrix() - rot_from_angle(kPi / 2).matrix()).norm() < 1e-14);
}

TEST_CASE("project_to_so2 matches a grid-search oracle") {
  // oracle: brute-force the nearest rotation over a 0.001 rad grid
  RngStream rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    Mat2 perturb;
    perturb << rng.normal(), rng.normal(), rng.normal(), rng.normal();
    const Mat2 m = rot_from_angle(0.3).matrix() + 0.01 * perturb;
    double best_theta = 0.0;
    double best = 1e100;
    for (int k = 0; k < 6284; ++k) {
      const double theta = -kPi + k * 0.001;
      const double d = (rot_from_angle(theta).matrix() - m).norm();
      if (d < best) {
        best = d;
        best_theta = theta;
      }
    }
    const Rotation2 r = project_to_so2(m);
    const double d_proj = (r.matrix() - m).norm();
    CHECK(d_proj <= best + 1e-9);  // projection at least as close as the best grid point
    CHECK(std::abs(normalize_angle(r.angle() - best_theta)) < 0.002);
  }
}

TEST_CASE("project_to_so2 properties: idempotent, scale invariant, degeneracy flag") {
  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Rotation2 r = rot_from_angle(rng.uniform(-kPi, kPi));
    CHECK((project_to_so2(r.matrix()).matrix() - r.matrix()).norm() < 1e-13);
    const double c = rng.uniform(0.1, 10.0);
    CHECK((project_to_so2(c * r.matrix()).matrix() - r.matrix()).norm() < 1e-12);
  }
  // equal singular values with negative determinant: non-unique minimizer
  Mat2 reflect;
  reflect << 1, 0, 0, -1;
  bool degenerate = false;
  project_to_so2(reflect, &degenerate);
  CHECK(degenerate);
  degenerate = true;
  project_to_so2(rot_from_angle(0.5).matrix(), &degenerate);
  CHECK_FALSE(degenerate);
}

TEST_CASE("frobenius_rot_distance values and identity") {
  const Rotation2 eye;
  CHECK(frobenius_rot_distance(eye, eye) == doctest::Approx(0.0));
  CHECK(frobenius_rot_distance(eye, rot_from_angle(kPi / 2)) == doctest::Approx(2.0));
  CHECK(frobenius_rot_distance(eye, rot_from_angle(kPi)) == doctest::Approx(2.0 * std::sqrt(2.0)));
  // ||I - R(theta)||_F = 2 sqrt(2) |sin(theta/2)| over a grid, to 1e-12
  for (int k = 0; k < 1000; ++k) {
    const double theta = -kPi + (k + 0.5) * (2.0 * kPi / 1000.0);
    const double lhs = frobenius_rot_distance(eye, rot_from_angle(theta));
    const double rhs = 2.0 * std::sqrt(2.0) * std::abs(std::sin(0.5 * theta));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("normalize_angle wraps into (-pi, pi]") {
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(0.1 - 4.0 * kPi) == doctest::Approx(0.1));
}
