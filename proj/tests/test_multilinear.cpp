#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvxtomo/multilinear.hpp"
#include "oracles.hpp"

using namespace cvxtomo;

namespace {

Eigen::MatrixXd random_psd(int m, Rng& rng) {
  const Eigen::MatrixXd phi = gaussian_matrix(m, m, rng);
  return phi.transpose() * phi;
}

std::vector<std::vector<int>> as_lists(const std::vector<MultiIndex>& v) {
  std::vector<std::vector<int>> out;
  for (const auto& i : v) out.push_back(i.entries);
  return out;
}

}  // namespace

TEST_CASE("multi_indices enumerates lexicographically") {
  const auto i32 = multi_indices(3, 2);
  REQUIRE(i32.size() == 3);
  CHECK(i32[0].str() == "{1,2}");
  CHECK(i32[1].str() == "{1,3}");
  CHECK(i32[2].str() == "{2,3}");
  CHECK(multi_indices(4, 1).size() == 4);
  const auto i53 = multi_indices(5, 3);
  REQUIRE(i53.size() == 10);
  CHECK(i53.front().str() == "{1,2,3}");
  CHECK(i53.back().str() == "{3,4,5}");
  CHECK_THROWS_AS(multi_indices(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(multi_indices(3, 0), std::invalid_argument);
}

TEST_CASE("rank and unrank are inverse bijections") {
  for (int m = 1; m <= 7; ++m)
    for (int k = 1; k <= m; ++k) {
      const auto all = multi_indices(m, k);
      CHECK(as_lists(all) == oracle::subsets(m, k));
      for (std::size_t r = 0; r < all.size(); ++r) {
        CHECK(rank(all[r]) == static_cast<std::int64_t>(r));
        CHECK(unrank(m, k, static_cast<std::int64_t>(r)) == all[r]);
      }
    }
}

TEST_CASE("wedge_power of identity and diagonal") {
  CHECK((wedge_power(Eigen::MatrixXd::Identity(3, 3), 2).entries - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  const Eigen::MatrixXd d = Eigen::Vector3d(1, 2, 3).asDiagonal();
  const Eigen::MatrixXd w = wedge_power(d, 2).entries;
  CHECK(w(0, 0) == doctest::Approx(2.0));
  CHECK(w(1, 1) == doctest::Approx(3.0));
  CHECK(w(2, 2) == doctest::Approx(6.0));
  CHECK((w - Eigen::MatrixXd(w.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("wedge_power entries match cofactor minors") {
  Rng rng(11);
  const Eigen::MatrixXd a = gaussian_matrix(5, 5, rng);
  const auto c = wedge_power(a, 3);
  const auto idx = oracle::subsets(5, 3);
  double worst = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      worst = std::max(worst, std::abs(c.entries(i, j) - oracle::minor(a, idx[i], idx[j])));
  CHECK(worst < 1e-12);
}

TEST_CASE("multiplicativity and diagonal action") {
  Rng rng(12);
  for (int m = 2; m <= 6; ++m)
    for (int k = 1; k <= std::min(3, m); ++k) {
      const Eigen::MatrixXd a = gaussian_matrix(m, m, rng), b = gaussian_matrix(m, m, rng);
      const Eigen::MatrixXd lhs = wedge_power(Eigen::MatrixXd(a * b), k).entries;
      const Eigen::MatrixXd rhs = wedge_power(a, k).entries * wedge_power(b, k).entries;
      CHECK((lhs - rhs).norm() < 1e-9);
      const auto ca = wedge_power(a, k);
      for (const auto& index : multi_indices(m, k)) {
        const auto e = KVector<double>::basis(index);
        CHECK(ca.apply(e).dot(e) == doctest::Approx(oracle::minor(a, index.entries, index.entries)).epsilon(1e-12));
      }
    }
}

TEST_CASE("wedge_power is symmetric for symmetric input") {
  Rng rng(13);
  const Eigen::MatrixXd s = random_psd(5, rng);
  const Eigen::MatrixXd w = wedge_power(s, 2).entries;
  CHECK((w - w.transpose()).norm() < 1e-12);
}

TEST_CASE("gram_inner signs and Gram identity") {
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 2);
  Eigen::MatrixXd v(3, 2);
  v << 0, 1, 1, 0, 0, 0;
  CHECK(gram_inner(u, u) == doctest::Approx(1.0));
  CHECK(gram_inner(u, v) == doctest::Approx(-1.0));
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd a = gaussian_matrix(5, 3, rng), b = gaussian_matrix(5, 3, rng);
    const double expansion = oracle::plucker(a).dot(oracle::plucker(b));
    CHECK(std::abs(gram_inner(a, b) - expansion) < 1e-12 * std::max(1.0, std::abs(expansion)));
    CHECK(std::abs(decompose(a).dot(decompose(b)) - expansion) < 1e-12 * std::max(1.0, std::abs(expansion)));
  }
}

TEST_CASE("decompose examples") {
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(4, 2);
  const auto xi = decompose(f);
  CHECK(xi.coords(0) == 1.0);
  CHECK(xi.coords.tail(5).norm() == 0.0);
  Eigen::MatrixXd dep(4, 2);
  dep << 1, 1, 0, 0, 0, 0, 0, 0;
  CHECK(decompose(dep).coords.norm() == 0.0);
  Eigen::MatrixXd g(4, 2);
  g << 1, 0, 0, 1, 1, 0, 0, 0;  // (e1 + e3, e2)
  const auto z = decompose(g);
  // basis order {12,13,14,23,24,34}
  CHECK(z.coords(0) == doctest::Approx(1.0));
  CHECK(z.coords(3) == doctest::Approx(-1.0));
  CHECK(std::abs(z.coords(1)) + std::abs(z.coords(2)) + std::abs(z.coords(4)) + std::abs(z.coords(5)) == 0.0);
  CHECK((z.coords - oracle::plucker(g)).norm() < 1e-15);
}

TEST_CASE("Bianchi identity for forms of psd maps") {
  Rng rng(15);
  for (int k = 2; k <= 3; ++k) {
    const auto omega = form_of(wedge_power(random_psd(5, rng), k));
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      Eigen::MatrixXd u = gaussian_matrix(5, k + 1, rng), v = gaussian_matrix(5, k - 1, rng);
      u.colwise().normalize();
      v.colwise().normalize();
      worst = std::max(worst, std::abs(bianchi_defect(omega, u, v)));
    }
    CHECK(worst < 1e-10);
  }
  const auto zero = SymKForm<double>::zero(4, 2);
  Rng r2(1);
  CHECK(bianchi_defect(zero, gaussian_matrix(4, 3, r2), gaussian_matrix(4, 1, r2)) == 0.0);
}

TEST_CASE("square form") {
  const auto e = [](std::vector<int> i) { return KVector<double>::basis(MultiIndex{std::move(i), 4}); };
  CHECK(square_form(e({0, 1})) == 0.0);
  CHECK(square_form(e({0, 1}) + e({2, 3})) == doctest::Approx(2.0));
  CHECK(square_form(e({0, 1}) - e({2, 3})) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(square_form_matrix(3), std::invalid_argument);
  CHECK_THROWS_AS(square_form(KVector<double>::zero(5, 2)), std::invalid_argument);
  const auto q = square_form_matrix(2);
  Eigen::MatrixXd u(4, 3), v(4, 1);
  u << 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0;
  v << 0, 0, 0, 1;
  CHECK(std::abs(bianchi_defect(q, u, v)) > 0.5);
}

TEST_CASE("polarization recognizes equal forms and refuses the square form") {
  Rng rng(16);
  const Eigen::MatrixXd g = random_psd(5, rng), h = random_psd(5, rng);
  const auto a = form_of(wedge_power(g, 2)) + form_of(wedge_power(h, 2));
  const auto b = form_of(CompoundMatrix<double>{5, 2, wedge_power(g, 2).entries + wedge_power(h, 2).entries});
  const auto r = polarization_check(a, b, 50, 1e-10, 3);
  CHECK(r.concluded);
  CHECK(r.equal);
  CHECK(r.reconstructed_difference < 1e-10);

  // Different forms that differ on decomposables are reported unequal.
  const auto c = a + form_of(wedge_power(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5)), 2));
  const auto rc = polarization_check(a, c, 50, 1e-10, 3);
  CHECK(rc.concluded);
  CHECK_FALSE(rc.equal);

  const auto q = square_form_matrix(2);
  const auto rq = polarization_check(q, SymKForm<double>::zero(4, 2), 50, 1e-10, 3);
  CHECK_FALSE(rq.concluded);
  CHECK(rq.refused == "A");
  CHECK(rq.entry_difference >= 1.0);
}

TEST_CASE("common eigenbasis") {
  SUBCASE("identity pair") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    const auto r = common_eigenbasis(id, id, 2, 2.0);
    CHECK((r.g_values.array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((r.basis.transpose() * r.basis - id).norm() < 1e-12);
  }
  SUBCASE("rotated scalar pair, m=4, k=2") {
    Rng rng(17);
    const Eigen::MatrixXd rot = random_orthogonal(4, rng);
    const double x = 0.8, beta = 1.3, y = std::sqrt(2 * beta - x * x);
    const Eigen::MatrixXd g = rot * (x * Eigen::MatrixXd::Identity(4, 4)) * rot.transpose();
    const Eigen::MatrixXd h = rot * (y * Eigen::MatrixXd::Identity(4, 4)) * rot.transpose();
    const auto r = common_eigenbasis(g, h, 2, 2 * beta);
    CHECK(r.diagonalization_residual < 1e-8);
  }
  SUBCASE("distinct spectra in a shared rotated basis") {
    Rng rng(18);
    const Eigen::MatrixXd rot = random_orthogonal(4, rng);
    const Eigen::Vector4d x(0.5, 0.9, 1.0, 1.2);
    // Pick y with x + y = 2 (k = 1) so the hypothesis holds.
    const Eigen::Vector4d y = (2.0 - x.array()).matrix();
    const Eigen::MatrixXd g = rot * x.asDiagonal() * rot.transpose();
    const Eigen::MatrixXd h = rot * y.asDiagonal() * rot.transpose();
    const auto r = common_eigenbasis(g, h, 1, 2.0);
    CHECK(r.diagonalization_residual < 1e-10);
  }
  SUBCASE("both singular violates the hypothesis") {
    const Eigen::MatrixXd g = Eigen::Vector4d(0, 1, 1, 1).asDiagonal();
    const Eigen::MatrixXd h = Eigen::Vector4d(1, 0, 1, 1).asDiagonal();
    try {
      common_eigenbasis(g, h, 2, 2.0);
      FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
      CHECK(e.measured() > 1e-10);
    }
  }
  SUBCASE("nonsingular flag under the hypothesis") {
    Rng rng(19);
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd rot = random_orthogonal(5, rng);
      const double c = 0.3 + std::uniform_real_distribution<double>(0, 2)(rng);
      const Eigen::MatrixXd g = rot * (c * Eigen::MatrixXd::Identity(5, 5)) * rot.transpose();
      const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(5, 5) * 0.7;
      const double beta = c * c + 0.49;
      const auto r = common_eigenbasis(g, h, 2, beta);
      CHECK(std::max(r.sigma_min_g, r.sigma_min_h) > r.nonsingular_bound * 0.999);
    }
  }
}
