#include "cvxtomo/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cvxtomo/errors.hpp"
#include "cvxtomo/optimize.hpp"
#include "cvxtomo/parallel.hpp"
#include "cvxtomo/random.hpp"

namespace cvxtomo {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return (m + m.transpose()) / 2.0; }

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

double spread(const Eigen::VectorXd& v) { return v.size() ? v.maxCoeff() - v.minCoeff() : 0.0; }

}  // namespace

Eigen::VectorXd SelfAdjointMap::eigenvalues() const {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(matrix, Eigen::EigenvaluesOnly).eigenvalues();
}

SelfAdjointMap reverse_weingarten(const ConvexBody& body, const TangentFrame& frame) {
  if (frame.u.dim() != body.dim()) throw std::invalid_argument("reverse_weingarten: dimension mismatch");
  const Eigen::MatrixXd hess = body.jet(frame.u.vec()).hessian;
  return {frame, symmetrize(frame.basis.transpose() * hess * frame.basis)};
}

SpdRoots spd_roots(const Eigen::MatrixXd& a, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a));
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam.size() && lam(0) < floor) {
    std::ostringstream os;
    os << "base map is not positive definite: eigenvalue " << lam(0);
    throw PreconditionError(os.str(), lam(0));
  }
  const Eigen::MatrixXd& q = es.eigenvectors();
  return {symmetrize(q * lam.cwiseSqrt().asDiagonal() * q.transpose()),
          symmetrize(q * lam.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose())};
}

SelfAdjointMap relative_map(const ConvexBody& body, const ConvexBody& base, const TangentFrame& frame) {
  if (body.dim() != base.dim()) throw std::invalid_argument("relative_map: bodies differ in dimension");
  const SpdRoots roots = spd_roots(reverse_weingarten(base, frame).matrix);
  const Eigen::MatrixXd l = reverse_weingarten(body, frame).matrix;
  return {frame, symmetrize(roots.inv_sqrt * l * roots.inv_sqrt)};
}

void require_central_symmetry(const ConvexBody& body, const Direction& u, double tol) {
  Rng rng(0x5eed);
  std::vector<Eigen::VectorXd> probes{u.vec()};
  for (int i = 0; i < 16; ++i) probes.push_back(random_direction(body.dim(), rng));
  for (const auto& v : probes) {
    const double plus = body.support(v);
    const double minus = body.support(-v);
    const double gap = std::abs(plus - minus);
    if (gap > tol * std::max(1.0, std::abs(plus)))
      throw PreconditionError("base body is not centrally symmetric (|h(v) - h(-v)| = " +
                                  std::to_string(gap) + ")",
                              gap);
  }
}

double wedge_identity_defect(const ConvexBody& body, const ConvexBody& base, int k, double beta,
                             const Direction& u) {
  require_central_symmetry(base, u);
  const TangentFrame frame = TangentFrame::householder(u);
  const auto plus = wedge_power(reverse_weingarten(body, frame).matrix, k).entries;
  const auto minus = wedge_power(reverse_weingarten(body, frame.antipode()).matrix, k).entries;
  const auto ref = wedge_power(reverse_weingarten(base, frame).matrix, k).entries;
  return spectral_norm(plus + minus - 2.0 * beta * ref);
}

RelativeWedgeResult relative_wedge_defect(const ConvexBody& body, const ConvexBody& base, int k, double beta,
                                          const Direction& u, double tol) {
  require_central_symmetry(base, u);
  const TangentFrame frame = TangentFrame::householder(u);
  const Eigen::MatrixXd g = relative_map(body, base, frame).matrix;
  const Eigen::MatrixXd h = relative_map(body, base, frame.antipode()).matrix;
  const auto n = static_cast<Eigen::Index>(binomial(static_cast<int>(g.rows()), k));
  RelativeWedgeResult out;
  out.defect = spectral_norm(wedge_power(g, k).entries + wedge_power(h, k).entries -
                             2.0 * beta * Eigen::MatrixXd::Identity(n, n));
  if (k > body.dim() - 2) {
    out.eigenbasis_note = "common eigenbasis only asserted for k <= n-2";
  } else if (out.defect >= tol) {
    out.eigenbasis_note = "wedge identity fails; common eigenbasis not attempted";
  } else {
    try {
      out.eigenbasis = common_eigenbasis(g, h, k, 2.0 * beta, tol);
    } catch (const std::exception& e) {
      out.eigenbasis_note = e.what();
    }
  }
  return out;
}

EigenProfile eigen_profile(const ConvexBody& body, const ConvexBody& base, const TangentFrame& frame) {
  return {relative_map(body, base, frame).eigenvalues()};
}

UmbilicResult umbilic_check(const ConvexBody& body, const ConvexBody& base, const Direction& u0, double tol) {
  const TangentFrame frame = TangentFrame::householder(u0);
  const SelfAdjointMap plus = relative_map(body, base, frame);
  const SelfAdjointMap minus = relative_map(body, base, frame.antipode());
  const Eigen::VectorXd rp = plus.eigenvalues();
  const Eigen::VectorXd rm = minus.eigenvalues();
  const auto d = rp.size();

  UmbilicResult out;
  out.u0 = u0;
  out.r0 = d ? (rp.sum() + rm.sum()) / static_cast<double>(2 * d) : 0.0;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  out.defect = std::max(spectral_norm(plus.matrix - out.r0 * id), spectral_norm(minus.matrix - out.r0 * id));
  out.r_defect = (rp - rm).norm();
  out.umbilic = out.defect < tol && out.r0 > 0.0;
  out.boundary_plus = body.jet(u0.vec()).gradient;
  out.boundary_minus = body.jet(-u0.vec()).gradient;
  out.separation = (out.boundary_plus - out.boundary_minus).dot(u0.vec());
  return out;
}

std::vector<Eigen::VectorXd> hemisphere_grid(int n, int count, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("hemisphere_grid: needs n >= 2");
  if (count < 1) throw std::invalid_argument("hemisphere_grid: needs at least one point");
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (i + 0.5) / count;  // in (0, 1)
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i + 2.0 * std::numbers::pi * static_cast<double>(seed % 997) / 997.0;
      Eigen::VectorXd v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(v);
    }
    return out;
  }
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd v = random_direction(n, rng);
    if (v(n - 1) < 0) v = -v;
    out.push_back(v);
  }
  return out;
}

UmbilicResult antipodal_search(const ConvexBody& body, const ConvexBody& base, const SearchOptions& options) {
  if (body.dim() != base.dim()) throw std::invalid_argument("antipodal_search: bodies differ in dimension");
  const int n = body.dim();
  if (n < 2) throw std::invalid_argument("antipodal_search: needs n >= 2");

  auto objective = [&](const Eigen::VectorXd& v) {
    const TangentFrame frame = TangentFrame::householder(Direction(v));
    const Eigen::VectorXd rp = eigen_profile(body, base, frame).values;
    const Eigen::VectorXd rm = eigen_profile(body, base, frame.antipode()).values;
    double f = (rp - rm).norm();
    if (options.objective == SearchObjective::umbilic_pair) f += spread(rp) + spread(rm);
    return f;
  };

  const auto grid = hemisphere_grid(n, options.budget, options.seed);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t i) { values[i] = objective(grid[i]); });
  int evaluations = static_cast<int>(grid.size());

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

  Eigen::VectorXd best = grid[order.front()];
  double best_value = values[order.front()];
  const double f_target = 1e-3 * options.tol;
  const int max_evals = options.max_refine_evals > 0 ? options.max_refine_evals : 10 * options.budget;
  // Simplex edge comparable to the grid spacing.
  const double spacing = std::numbers::pi / std::pow(static_cast<double>(options.budget), 1.0 / (n - 1));
  const int starts = std::min<int>(options.refine_starts, static_cast<int>(grid.size()));

  for (int s = 0; s < starts && best_value > f_target; ++s) {
    Eigen::VectorXd center = grid[order[static_cast<std::size_t>(s)]];
    double center_value = values[order[static_cast<std::size_t>(s)]];
    double step = spacing;
    int used = 0;
    // Re-chart around the current point after each simplex run.
    for (int round = 0; round < 6 && used < max_evals && center_value > f_target; ++round) {
      const Eigen::MatrixXd chart = householder_tangent_basis(center);
      auto in_chart = [&](const Eigen::VectorXd& z) { return objective((center + chart * z).normalized()); };
      const NelderMeadResult r = nelder_mead(in_chart, Eigen::VectorXd::Zero(n - 1), step, max_evals - used,
                                             1e-15, f_target);
      used += r.evaluations;
      if (r.value < center_value) {
        center = (center + chart * r.x).normalized();
        center_value = r.value;
      }
      step = std::max(10.0 * r.x.norm(), 1e-6) * 0.5;
    }
    evaluations += used;
    if (center_value < best_value) {
      best = center;
      best_value = center_value;
    }
  }

  UmbilicResult out = umbilic_check(body, base, Direction(best), options.tol);
  out.evaluations = evaluations;
  out.converged = options.objective == SearchObjective::antipodal ? out.r_defect < options.tol
                                                                  : (out.r_defect < options.tol && out.umbilic);
  return out;
}

RevolutionEigenstructure revolution_eigenstructure(const ConvexBody& body, const Direction& u,
                                                   std::optional<Eigen::VectorXd> axis) {
  if (!axis) axis = body.declared_axis();
  if (!axis) throw std::invalid_argument("revolution_eigenstructure: body declares no axis; pass one");
  if (!body.symmetric_about(*axis))
    throw std::invalid_argument("revolution_eigenstructure: body is not symmetric about the given axis");
  const int n = body.dim();
  const Eigen::VectorXd e = axis->normalized();
  const double sin_phi = std::clamp(u.vec().dot(e), -1.0, 1.0);
  const Eigen::VectorXd radial = u.vec() - sin_phi * e;
  const double cos_phi = radial.norm();
  if (cos_phi < 1e-12) throw std::invalid_argument("revolution_eigenstructure: u must differ from +-axis");
  const Eigen::VectorXd v0 = radial / cos_phi;

  const Eigen::MatrixXd hess = body.jet(u.vec()).hessian;
  RevolutionEigenstructure out;
  out.phi = std::atan2(sin_phi, cos_phi);
  const Eigen::VectorXd w = -sin_phi * v0 + cos_phi * e;
  out.x1 = w.dot(hess * w);
  out.eigenvector_residual = (hess * w - out.x1 * w).norm();

  // Orthonormal basis of e-perp cap v0-perp.
  Eigen::MatrixXd span(n, 2);
  span << e, v0;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd equatorial = q.rightCols(n - 2);
  if (n > 2) {
    const Eigen::MatrixXd block = symmetrize(equatorial.transpose() * hess * equatorial);
    out.x = block.trace() / static_cast<double>(n - 2);
    out.multiplicity_defect = spectral_norm(block - out.x * Eigen::MatrixXd::Identity(n - 2, n - 2));
  }
  return out;
}

double RevolutionRelations::max() const { return std::max({first, second, third, consequence}); }

RevolutionRelations revolution_relations_check(const ConvexBody& body, const ConvexBody& base, int i,
                                               double alpha, double beta, const Direction& u) {
  const int n = body.dim();
  if (base.dim() != n) throw std::invalid_argument("revolution_relations_check: dimension mismatch");
  if (n < 3) throw std::invalid_argument("revolution_relations_check: needs n >= 3");
  if (i != 1 && i != n - 2) throw std::invalid_argument("revolution_relations_check: i must be 1 or n-2");
  std::optional<Eigen::VectorXd> axis = body.declared_axis();
  if (!axis) axis = base.declared_axis();
  if (!axis || !body.symmetric_about(*axis) || !base.symmetric_about(*axis))
    throw std::invalid_argument("revolution_relations_check: bodies do not share an axis of revolution");
  if (std::abs(u.vec().dot(axis->normalized())) > 1e-9)
    throw std::invalid_argument("revolution_relations_check: u must lie on the equator <u,e> = 0");

  const auto kp = revolution_eigenstructure(body, u, axis);
  const auto km = revolution_eigenstructure(body, -u, axis);
  const auto k0 = revolution_eigenstructure(base, u, axis);
  RevolutionRelations out;
  out.first = std::abs(kp.x1 * std::pow(kp.x, i - 1) + km.x1 * std::pow(km.x, i - 1) -
                       2.0 * alpha * k0.x1 * std::pow(k0.x, i - 1));
  out.second = std::abs(std::pow(kp.x, i) + std::pow(km.x, i) - 2.0 * alpha * std::pow(k0.x, i));
  out.third = std::abs(kp.x1 * std::pow(kp.x, n - 2) + km.x1 * std::pow(km.x, n - 2) -
                       2.0 * beta * k0.x1 * std::pow(k0.x, n - 2));
  out.consequence = std::abs(std::pow(alpha, n - 1) - std::pow(beta, i));
  return out;
}

DetRatioReport det_ratio_constancy(const ConvexBody& body, const ConvexBody& base, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("det_ratio_constancy: needs samples >= 1");
  Rng rng(seed);
  DetRatioReport out;
  for (int s = 0; s < samples; ++s) {
    const TangentFrame frame = TangentFrame::householder(Direction(random_direction(body.dim(), rng)));
    const double d0 = reverse_weingarten(base, frame).determinant();
    if (!(d0 > 0.0)) throw PreconditionError("det_ratio_constancy: base map is singular", d0);
    out.ratios.push_back(reverse_weingarten(body, frame).determinant() / d0);
  }
  for (double r : out.ratios) out.mean += r;
  out.mean /= static_cast<double>(out.ratios.size());
  for (double r : out.ratios)
    out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(r - out.mean) / std::abs(out.mean));
  return out;
}

}  // namespace cvxtomo
