// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "cvxtomo/body.hpp"
#include "cvxtomo/lemma_lab.hpp"
#include "cvxtomo/multilinear.hpp"
#include "cvxtomo/random.hpp"
#include "cvxtomo/tomography.hpp"
#include "cvxtomo/weingarten.hpp"

using namespace cvxtomo;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

ConvexBody ellipsoid4() { return ConvexBody::ellipsoid(Eigen::Vector4d(1, 1.69, 0.64, 1.21).asDiagonal()); }
ConvexBody homothet4() { return ConvexBody::homothet(ellipsoid4(), 0.7, Eigen::Vector4d(0.1, 0, -0.2, 0)); }

Outcome wedge_identity() {
  const auto start = std::chrono::steady_clock::now();
  const auto base = ellipsoid4(), body = homothet4();
  Rng rng(1001);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Direction u(random_direction(4, rng));
    for (int k = 1; k <= 3; ++k) worst = std::max(worst, wedge_identity_defect(body, base, k, std::pow(0.7, k), u));
  }
  const double t = seconds_since(start);
  return {worst < 1e-8 && t < 5.0, fmt("max defect %.3e (< 1e-8), %.2f s (< 5 s)", worst, t)};
}

Outcome projection_proportionality() {
  const auto r = proportionality_test(homothet4(), ellipsoid4(), 2, 50, 1002, Quadrature{256, 0}, threads());
  double worst = 0.0;
  for (double v : r.ratios) worst = std::max(worst, std::isnan(v) ? INFINITY : std::abs(v / 0.49 - 1.0));
  return {worst < 1e-5 && r.ratios.size() == 50, fmt("max |ratio/0.49 - 1| = %.3e over %zu subspaces (< 1e-5)",
                                                      worst, r.ratios.size())};
}

Outcome ball_volumes() {
  const auto ball = ConvexBody::ball(5, 1.0);
  const double v2 = volume_from_support(project(ball, random_subspace(5, 2, 1003)));
  const double v3 = volume_from_support(project(ball, random_subspace(5, 3, 1004)));
  const double e2 = std::abs(v2 - pi), e3 = std::abs(v3 - 4 * pi / 3);
  return {e2 < 1e-10 && e3 < 1e-6, fmt("|V2 - pi| = %.3e (< 1e-10), |V3 - 4pi/3| = %.3e (< 1e-6)", e2, e3)};
}

Outcome bianchi_polarization() {
  Rng rng(1005);
  double bianchi = 0.0, recon = 0.0;
  int unequal = 0;
  for (int p = 0; p < 200; ++p) {
    const int k = 2 + p % 2;
    const Eigen::MatrixXd a = gaussian_matrix(5, 5, rng), b = gaussian_matrix(5, 5, rng);
    const Eigen::MatrixXd g = a * a.transpose(), h = b * b.transpose();
    const auto wg = wedge_power(g, k), wh = wedge_power(h, k);
    const auto omega = form_of(CompoundMatrix<double>{5, k, wg.entries + wh.entries});
    bianchi = std::max(bianchi, detail::max_abs_bianchi(omega, 20, rng) / std::max(1.0, omega.matrix().norm()));
    const auto res = polarization_check(omega, form_of(wg) + form_of(wh), 20, 1e-10, stream_seed(1005, p));
    recon = std::max(recon, res.reconstructed_difference);
    unequal += !(res.concluded && res.equal);
  }
  return {bianchi < 1e-10 && recon <= 1e-8 && unequal == 0,
          fmt("max relative Bianchi defect %.3e (< 1e-10), max reconstructed difference %.3e (<= 1e-8), %d pairs "
              "not judged equal",
              bianchi, recon, unequal)};
}

Outcome square_form_counterexample() {
  const auto q = square_form_matrix<double>(2);
  Rng rng(1006);
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const auto xi = decompose(gaussian_matrix(4, 2, rng));
    worst = std::max(worst, std::abs(q(xi, xi)) / std::max(1.0, xi.dot(xi)));
  }
  const double norm = q.matrix().norm();
  const auto res = polarization_check(q, SymKForm<double>::zero(4, 2), 20, 1e-10, 1006);
  const bool refused = !res.concluded && res.refused == "A";
  return {worst < 1e-12 && norm >= 1.0 && refused,
          fmt("max |Q(xi,xi)| on decomposables %.3e (< 1e-12), ||Q|| = %.3f (>= 1), refused: %s", worst, norm,
              refused ? "yes" : "no")};
}

Outcome umbilic_search() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2007);
  const Eigen::VectorXd axis = random_direction(5, rng);
  SearchOptions opt;
  opt.seed = 1007;
  opt.budget = 2000;
  opt.tol = 1e-6;
  opt.objective = SearchObjective::umbilic_pair;
  opt.threads = threads();
  const auto r = antipodal_search(ConvexBody::spheroid(axis, 1.0, 1.4), ConvexBody::ball(5, 1.0), opt);
  const Eigen::VectorXd& u0 = r.u0.vec();
  const double angle = std::atan2((u0 - u0.dot(axis) * axis).norm(), std::abs(u0.dot(axis)));
  const double r0 = std::abs(r.r0 - 1.0 / 1.4);
  const double t = seconds_since(start);
  return {r.converged && angle < 1e-3 && r0 < 1e-6 && t < 30.0,
          fmt("converged %s, angle to axis %.3e (< 1e-3), |r0 - 1/1.4| = %.3e (< 1e-6), %.2f s (< 30 s)",
              r.converged ? "yes" : "no", angle, r0, t)};
}

Outcome finite_set_lemma() {
  const auto set = enumerate_candidates(1.0, 2.0, 1, 3, 4);
  // 6x^2 - 12x + 4 = 0 by the quadratic formula.
  const double disc = std::sqrt(144.0 - 96.0);
  const double roots[] = {(12.0 - disc) / 12.0, (12.0 + disc) / 12.0};
  double substitution = 0.0, membership = 0.0;
  for (double x : roots) {
    substitution = std::max(substitution, std::abs(x * x * x + (2 - x) * (2 - x) * (2 - x) - 4.0));
    membership = std::max(membership, set.distance(x));
  }
  SolverOptions opt;
  opt.seed = 1008;
  opt.wanted = 200;
  opt.restarts = 20000;
  const auto run = solve_hypotheses(1.0, 2.0, 1, 3, 4, opt);
  double worst = 0.0;
  for (const auto& s : run.solutions)
    for (double y : s.y) worst = std::max(worst, set.distance(y));
  const bool ok = substitution < 1e-12 && membership < 1e-10 && run.solutions.size() == 200 && worst <= 1e-6;
  return {ok, fmt("roots 1 +- 1/sqrt3 substitute to %.1e and sit %.1e from candidates; %zu solutions, max distance "
                  "%.3e (<= 1e-6)",
                  substitution, membership, run.solutions.size(), worst)};
}

Outcome antipodal_lemma() {
  const auto c = antipodal_campaign(6, 2, 1000000, 1009, 1e-9, threads());
  const bool ok = c.counterexamples == 0 && c.constant_failures == 0 && c.constant_trials > 0;
  return {ok, fmt("%ld trials, %ld non-constant solutions, %ld/%ld constant inputs not exact, best non-constant "
                  "residual %.3e",
                  c.trials, c.counterexamples, c.constant_failures, c.constant_trials, c.best_nonconstant)};
}

Outcome revolution_relations() {
  const Eigen::VectorXd axis = Eigen::Vector4d(1, -1, 2, 0.5).normalized();
  const auto base = ConvexBody::spheroid(axis, 1.0, 1.5);
  const auto body = ConvexBody::homothet(base, 1.2, Eigen::Vector4d(0.2, 0, -0.1, 0.3));
  Eigen::VectorXd u = Eigen::Vector4d(0.3, 0.8, -0.2, 1.0);
  u -= u.dot(axis) * axis;
  double worst = 0.0, consequence = 0.0;
  for (int i : {1, 2}) {
    const auto r = revolution_relations_check(body, base, i, std::pow(1.2, i), std::pow(1.2, 3), Direction(u));
    worst = std::max({worst, r.first, r.second, r.third});
    consequence = std::max(consequence, r.consequence);
  }
  return {worst < 1e-8 && consequence < 1e-8,
          fmt("max relation defect %.3e (< 1e-8), |alpha^3 - beta^i| = %.3e (< 1e-8)", worst, consequence)};
}

Outcome constant_width() {
  const auto body = ConvexBody::harmonic_perturbation(ConvexBody::ball(3, 1.0), Eigen::Vector3d(0, 0, 1),
                                                      {-1.5, 2.5}, 0.1);
  Rng rng(1010);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) worst = std::max(worst, std::abs(width(body, Direction(random_direction(3, rng))) - 2.0));
  const auto v = validate(body, 1000, 1010);
  const bool ok = worst < 1e-12 && v.min_radius > 0.0 && v.max_radius <= 2.0 + 1e-6;
  return {ok, fmt("max |width - 2| = %.3e (< 1e-12), radii in [%.4f, %.4f]", worst, v.min_radius, v.max_radius)};
}

Outcome derivative_correctness() {
  Rng rng(1011);
  Eigen::Matrix3d a;
  a << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.0;
  const Eigen::Vector3d e = Eigen::Vector3d(1, -2, 2) / 3.0;
  const auto ball = ConvexBody::ball(3, 1.0);
  const auto ell = ConvexBody::ellipsoid(a);
  Eigen::MatrixXd a5 = gaussian_matrix(5, 5, rng);
  a5 = a5 * a5.transpose() + Eigen::MatrixXd::Identity(5, 5);
  const std::vector<ConvexBody> bodies{
      ball,
      ell,
      ConvexBody::spheroid(e, 1.0, 1.4),
      ConvexBody::revolution(e, Profile::from_polynomial({1.0, 0.05, 0.1})),
      ConvexBody::harmonic_perturbation(ball, e, {-1.5, 2.5}, 0.1),
      ConvexBody::minkowski_sum({ball, ell}),
      ConvexBody::homothet(ell, 0.7, Eigen::Vector3d(0.1, 0.0, -0.2)),
      ConvexBody::erosion(ell, 0.2),
      ConvexBody::projection(ConvexBody::ellipsoid(a5), random_subspace(5, 3, 1011).columns)};
  double worst = 0.0;
  std::string worst_family;
  for (const auto& body : bodies) {
    for (int s = 0; s < 100; ++s) {
      const Eigen::VectorXd u = random_direction(3, rng);
      const auto j = body.jet(u);
      const auto fd = finite_difference_jet(body, u, 1e-5);
      const double scale = std::max(1.0, j.hessian.norm());
      const double rel = std::max((fd.gradient - j.gradient).norm() / std::max(1.0, j.gradient.norm()),
                                  (fd.hessian - j.hessian).norm() / scale);
      if (rel > worst) {
        worst = rel;
        worst_family = body.family_name();
      }
    }
  }
  return {worst < 1e-6, fmt("%zu families, max relative jet difference %.3e (< 1e-6, worst: %s)", bodies.size(),
                            worst, worst_family.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"wedge identity for a homothetic ellipsoid pair", wedge_identity},
      {"projection proportionality, k = 2", projection_proportionality},
      {"ball shadow volumes", ball_volumes},
      {"Bianchi identity and polarization", bianchi_polarization},
      {"square form counterexample", square_form_counterexample},
      {"umbilic search on a spheroid", umbilic_search},
      {"finite candidate set, N = 4, k = 1, m = 3", finite_set_lemma},
      {"antipodal products, M = 6, k = 2", antipodal_lemma},
      {"revolution relations", revolution_relations},
      {"constant width", constant_width},
      {"analytic jets vs finite differences", derivative_correctness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.details.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
