#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvxtomo/random.hpp"
#include "cvxtomo/tomography.hpp"

using namespace cvxtomo;
using std::numbers::pi;

namespace {

Eigen::MatrixXd random_spd(int n, Rng& rng) {
  const Eigen::MatrixXd g = gaussian_matrix(n, n, rng);
  return g * g.transpose() / n + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("random subspaces") {
  const auto a = random_subspace(6, 3, 42), b = random_subspace(6, 3, 42);
  CHECK(a.columns == b.columns);
  CHECK((a.columns.transpose() * a.columns - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  CHECK(a.columns != random_subspace(6, 3, 43).columns);
  CHECK_THROWS_AS(random_subspace(4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_subspace(4, 4, 1), std::invalid_argument);

  // Haar moments: E[P_U] = (k/n) I for the orthogonal projection onto U.
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(5, 5);
  const int count = 4000;
  for (int s = 0; s < count; ++s) {
    const auto f = random_subspace(5, 2, stream_seed(9, static_cast<std::uint64_t>(s))).columns;
    mean += f * f.transpose();
  }
  mean /= count;
  CHECK((mean - 0.4 * Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("shadows: generic restriction agrees with closed forms") {
  Rng rng(1);
  const auto ell = ConvexBody::ellipsoid(random_spd(5, rng));
  const auto bodies = {ell, ConvexBody::ball(5, 1.3),
                       ConvexBody::homothet(ell, 0.6, Eigen::VectorXd::LinSpaced(5, -1, 1)),
                       ConvexBody::minkowski_sum({ell, ConvexBody::spheroid(random_direction(5, rng), 1.0, 2.0)})};
  const auto frame = random_subspace(5, 3, 7);
  for (const auto& body : bodies) {
    const auto shadow = project(body, frame);
    const auto closed = intrinsic(body, frame);
    REQUIRE(closed.has_value());
    CHECK(shadow.dim() == 3);
    for (int t = 0; t < 30; ++t) {
      const Eigen::VectorXd w = random_direction(3, rng);
      CHECK(std::abs(shadow.support(w) - body.support(frame.columns * w)) < 1e-14);
      const auto js = shadow.jet(w), jc = closed->jet(w);
      CHECK(std::abs(js.value - jc.value) < 1e-12);
      CHECK((js.hessian - jc.hessian).norm() < 1e-10);
    }
  }
  const auto odd = ConvexBody::harmonic_perturbation(ConvexBody::ball(5, 1.0), random_direction(5, rng), {1.0}, 0.1);
  CHECK(!intrinsic(odd, frame).has_value());
}

TEST_CASE("volumes from the support function") {
  CHECK(std::abs(volume_from_support(ConvexBody::ball(2, 1.0)) - pi) < 1e-10);
  CHECK(std::abs(volume_from_support(ConvexBody::ball(3, 1.0)) - 4 * pi / 3) < 1e-6);
  CHECK(std::abs(volume_from_support(ConvexBody::ball(1, 0.7)) - 1.4) < 1e-15);
  // Ellipse with semi-axes 1 and 2.
  CHECK(std::abs(volume_from_support(ConvexBody::ellipsoid(Eigen::Vector2d(1, 4).asDiagonal())) - 2 * pi) < 1e-10);
  // Ellipsoid with semi-axes 1, 2, 3.
  CHECK(std::abs(volume_from_support(ConvexBody::ellipsoid(Eigen::Vector3d(1, 4, 9).asDiagonal())) - 8 * pi) <
        1e-6);
  CHECK_THROWS_AS(volume_estimate(ConvexBody::ball(2, 1.0), Quadrature{3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(volume_estimate(ConvexBody::ball(4, 1.0), Quadrature{8, 0}), std::invalid_argument);
}

TEST_CASE("Gauss-Legendre rule") {
  Eigen::VectorXd x, w;
  gauss_legendre(6, x, w);
  CHECK(std::abs(w.sum() - 2.0) < 1e-14);
  // Exact through degree 11.
  for (int d = 0; d <= 11; ++d) {
    double q = 0.0;
    for (int i = 0; i < 6; ++i) q += w(i) * std::pow(x(i), d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    CHECK(std::abs(q - exact) < 1e-13);
  }
}

TEST_CASE("quadrature converges and respects homogeneity and translation") {
  Rng rng(2);
  const auto ell = ConvexBody::ellipsoid(random_spd(3, rng));
  const double exact = 4 * pi / 3 * std::sqrt(std::get<family::Ellipsoid>(ell.data()).shape.determinant());
  double prev = INFINITY;
  for (int m : {8, 16, 32, 64}) {
    const double err = std::abs(volume_from_support(ell, Quadrature{m, 0}) - exact);
    CHECK(err <= prev * 1.01 + 1e-13);
    prev = err;
  }
  CHECK(prev < 1e-8);
  const auto big = ConvexBody::homothet(ell, 1.5, Eigen::Vector3d(0, 0, 0));
  CHECK(std::abs(volume_from_support(big) - std::pow(1.5, 3) * volume_from_support(ell)) < 1e-9);
  const auto moved = ConvexBody::homothet(ell, 1.0, Eigen::Vector3d(3, -1, 2));
  CHECK(std::abs(volume_from_support(moved) - volume_from_support(ell)) < 1e-9);
  const auto e2 = ConvexBody::ellipsoid(random_spd(2, rng));
  const auto m2 = ConvexBody::homothet(e2, 1.0, Eigen::Vector2d(5, 5));
  CHECK(std::abs(volume_from_support(m2) - volume_from_support(e2)) < 1e-10);
}

TEST_CASE("Monte Carlo volume in dimension four") {
  // Unit 4-ball: pi^2 / 2.
  const auto est = volume_estimate(ConvexBody::ball(4, 1.0), Quadrature{2000, 3});
  CHECK(std::abs(est.value - pi * pi / 2) < 1e-10);  // h det L is constant on the ball
  const auto ell = ConvexBody::ellipsoid(Eigen::Vector4d(1, 4, 1, 2.25).asDiagonal());
  const auto e = volume_estimate(ell, Quadrature{20000, 3});
  const double exact = pi * pi / 2 * 3.0;
  CHECK(e.standard_error > 0.0);
  CHECK(std::abs(e.value - exact) < 5 * e.standard_error);
  const auto again = volume_estimate(ell, Quadrature{20000, 3});
  CHECK(again.value == e.value);
}

TEST_CASE("projection function and proportionality") {
  Rng rng(3);
  const auto base = ConvexBody::ellipsoid(Eigen::Vector4d(1, 1.69, 0.64, 1.21).asDiagonal());
  const auto hom = ConvexBody::homothet(base, 0.7, Eigen::Vector4d(0.1, 0, -0.2, 0));
  for (int k : {1, 2, 3}) {
    const auto r = proportionality_test(hom, base, k, 20, 11);
    CHECK(std::abs(r.alpha - std::pow(0.7, k)) < 1e-9);
    CHECK(r.max_relative_deviation < 1e-5);
    CHECK(r.excluded.empty());
  }
  // Same seed, same frames and same values, independent of the thread count.
  const auto p1 = projection_function(base, 2, 12, 5, {}, 1);
  const auto p4 = projection_function(base, 2, 12, 5, {}, 4);
  for (std::size_t s = 0; s < p1.size(); ++s) {
    CHECK(p1[s].volume == p4[s].volume);
    CHECK(p1[s].frame.columns == random_subspace(4, 2, stream_seed(5, s)).columns);
  }
  // Constant width 2 against the unit ball: V_1 proportional with ratio 1.
  const auto cw = ConvexBody::harmonic_perturbation(ConvexBody::ball(3, 1.0), Eigen::Vector3d(0, 0, 1), {-1.5, 2.5}, 0.1);
  const auto w = proportionality_test(cw, ConvexBody::ball(3, 1.0), 1, 50, 2);
  CHECK(std::abs(w.alpha - 1.0) < 1e-12);
  CHECK(w.max_relative_deviation < 1e-12);
  // A non-homothetic pair of ellipsoids is not proportional.
  const auto other = proportionality_test(ConvexBody::ellipsoid(random_spd(4, rng)), base, 2, 20, 2);
  CHECK(other.max_relative_deviation > 1e-3);
}

TEST_CASE("ratio consistency and homothety fit") {
  const auto base = ConvexBody::ellipsoid(Eigen::Vector4d(1, 1.69, 0.64, 1.21).asDiagonal());
  const auto hom = ConvexBody::homothet(base, 1.3, Eigen::Vector4d(0.5, -0.5, 0, 1));
  CHECK(ratio_consistency_check(hom, base, 1, 2, 10, 4) < 1e-9);
  CHECK(ratio_consistency_check(hom, base, 2, 3, 10, 4) < 1e-7);
  const auto fit = homothety_fit(hom, base, 200, 6);
  CHECK(std::abs(fit.lambda - 1.3) < 1e-12);
  CHECK((fit.translation - Eigen::Vector4d(0.5, -0.5, 0, 1)).norm() < 1e-12);
  CHECK(fit.residual < 1e-12);
  const auto bad = homothety_fit(ConvexBody::ellipsoid(Eigen::Vector4d(2, 1, 1, 1).asDiagonal()), base, 200, 6);
  CHECK(bad.residual > 1e-2);
}
