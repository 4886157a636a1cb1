#include "cvxtomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cvxtomo/parallel.hpp"
#include "cvxtomo/random.hpp"
#include "cvxtomo/weingarten.hpp"

namespace cvxtomo {

SubspaceFrame random_subspace(int n, int k, std::uint64_t seed) {
  if (k < 1 || k > n - 1) throw std::invalid_argument("random_subspace: needs 1 <= k <= n-1");
  Rng rng(seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(n, k, rng));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  for (int j = 0; j < k; ++j)
    if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
  return {n, k, q};
}

SubspaceFrame coordinate_subspace(int n, const std::vector<int>& axes) {
  const int k = static_cast<int>(axes.size());
  if (k < 1 || k > n - 1) throw std::invalid_argument("coordinate_subspace: needs 1 <= k <= n-1 axes");
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, k);
  for (int j = 0; j < k; ++j) {
    if (axes[j] < 0 || axes[j] >= n) throw std::invalid_argument("coordinate_subspace: axis out of range");
    f(axes[j], j) = 1.0;
  }
  if ((f.transpose() * f - Eigen::MatrixXd::Identity(k, k)).norm() > 0)
    throw std::invalid_argument("coordinate_subspace: repeated axis");
  return {n, k, f};
}

std::optional<ConvexBody> intrinsic(const ConvexBody& body, const SubspaceFrame& frame) {
  const Eigen::MatrixXd& f = frame.columns;
  const BodyData& data = body.data();
  if (const auto* b = std::get_if<family::Ball>(&data)) return ConvexBody::ball(frame.k, b->radius);
  if (const auto* e = std::get_if<family::Ellipsoid>(&data)) {
    Eigen::MatrixXd a = f.transpose() * e->shape * f;
    return ConvexBody::ellipsoid((a + a.transpose()) / 2.0);
  }
  if (const auto* s = std::get_if<family::Spheroid>(&data)) {
    Eigen::MatrixXd a = f.transpose() * s->shape * f;
    return ConvexBody::ellipsoid((a + a.transpose()) / 2.0);
  }
  if (const auto* h = std::get_if<family::Homothet>(&data)) {
    auto base = intrinsic(*h->base, frame);
    if (!base) return std::nullopt;
    return ConvexBody::homothet(*base, h->lambda, f.transpose() * h->translation);
  }
  if (const auto* m = std::get_if<family::MinkowskiSum>(&data)) {
    std::vector<ConvexBody> members;
    for (const auto& member : m->members) {
      auto p = intrinsic(member, frame);
      if (!p) return std::nullopt;
      members.push_back(*p);
    }
    return ConvexBody::minkowski_sum(std::move(members));
  }
  return std::nullopt;
}

void gauss_legendre(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: needs m >= 1");
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // Newton on P_m from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes(i) = x;
    weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

// h(u) det L(h)(u) at a unit u.
double area_integrand(const ConvexBody& body, const Eigen::VectorXd& u) {
  return body.support(u) * reverse_weingarten(body, Direction(u)).determinant();
}

}  // namespace

VolumeEstimate volume_estimate(const ConvexBody& kbody, const Quadrature& quadrature) {
  const int k = kbody.dim();
  const int m = quadrature.nodes;
  if (k == 1) return {width(kbody, Direction::axis(1, 0)), 0.0};
  if (k == 2) {
    if (m < 4) throw std::invalid_argument("volume_from_support: k=2 needs at least 4 circle nodes");
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double t = 2.0 * std::numbers::pi * i / m;
      sum += area_integrand(kbody, Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
    return {0.5 * sum * 2.0 * std::numbers::pi / m, 0.0};
  }
  if (k == 3) {
    if (m < 2) throw std::invalid_argument("volume_from_support: k=3 needs at least 2 Gauss-Legendre nodes");
    Eigen::VectorXd z, w;
    gauss_legendre(m, z, w);
    const int az = 2 * m;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = std::sqrt(std::max(0.0, 1.0 - z(i) * z(i)));
      double ring = 0.0;
      for (int j = 0; j < az; ++j) {
        const double phi = 2.0 * std::numbers::pi * (j + 0.5) / az;
        ring += area_integrand(kbody, Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z(i)));
      }
      sum += w(i) * ring * 2.0 * std::numbers::pi / az;
    }
    return {sum / 3.0, 0.0};
  }
  if (m < 16) throw std::invalid_argument("volume_from_support: k>=4 needs at least 16 samples");
  Rng rng(quadrature.seed);
  double mean = 0.0, m2 = 0.0;
  for (int s = 0; s < m; ++s) {
    const double f = area_integrand(kbody, random_direction(k, rng));
    const double delta = f - mean;
    mean += delta / (s + 1);
    m2 += delta * (f - mean);
  }
  const double sphere = 2.0 * std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0);
  const double scale = sphere / k;
  return {scale * mean, scale * std::sqrt(m2 / (m - 1) / m)};
}

std::vector<ProjectionSample> projection_function(const ConvexBody& body, int k, int num_frames, std::uint64_t seed,
                                                  const Quadrature& quadrature, unsigned threads) {
  if (num_frames < 1) throw std::invalid_argument("projection_function: needs num_frames >= 1");
  std::vector<ProjectionSample> out(static_cast<std::size_t>(num_frames));
  parallel_for(out.size(), threads, [&](std::size_t s) {
    out[s].frame = random_subspace(body.dim(), k, stream_seed(seed, s));
    out[s].volume = volume_from_support(project(body, out[s].frame), quadrature);
  });
  return out;
}

ProportionalityReport proportionality_test(const ConvexBody& body, const ConvexBody& base, int k, int num_frames,
                                           std::uint64_t seed, const Quadrature& quadrature, unsigned threads) {
  if (body.dim() != base.dim()) throw std::invalid_argument("proportionality_test: bodies differ in dimension");
  const auto vk = projection_function(body, k, num_frames, seed, quadrature, threads);
  const auto v0 = projection_function(base, k, num_frames, seed, quadrature, threads);
  ProportionalityReport out;
  out.seed = seed;
  std::vector<double> valid;
  for (std::size_t s = 0; s < vk.size(); ++s) {
    out.frames.push_back(vk[s].frame);
    if (!(std::abs(v0[s].volume) > 1e-14)) {
      out.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      out.excluded.push_back(static_cast<int>(s));
      out.warnings.push_back("sample " + std::to_string(s) + ": degenerate shadow of the base body, excluded");
      continue;
    }
    out.ratios.push_back(vk[s].volume / v0[s].volume);
    valid.push_back(out.ratios.back());
  }
  if (valid.empty()) throw std::invalid_argument("proportionality_test: every sampled shadow of K0 is degenerate");
  std::vector<double> sorted = valid;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  out.alpha = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  for (double r : valid)
    out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(r - out.alpha) / std::abs(out.alpha));
  return out;
}

double ratio_consistency_check(const ConvexBody& body, const ConvexBody& base, int i, int j, int num_frames,
                               std::uint64_t seed, const Quadrature& quadrature) {
  if (!(1 <= i && i < j)) throw std::invalid_argument("ratio_consistency_check: needs 1 <= i < j");
  if (num_frames < 1) throw std::invalid_argument("ratio_consistency_check: needs num_frames >= 1");
  const int n = body.dim();
  double defect = 0.0;
  for (int s = 0; s < num_frames; ++s) {
    const auto l = random_subspace(n, i, stream_seed(seed, 2 * static_cast<std::uint64_t>(s)));
    const auto u = random_subspace(n, j, stream_seed(seed, 2 * static_cast<std::uint64_t>(s) + 1));
    const double rj = std::pow(volume_from_support(project(base, u), quadrature) /
                                   volume_from_support(project(body, u), quadrature),
                               1.0 / j);
    const double ri = std::pow(volume_from_support(project(base, l), quadrature) /
                                   volume_from_support(project(body, l), quadrature),
                               1.0 / i);
    defect = std::max(defect, std::abs(rj - ri));
  }
  return defect;
}

HomothetyFit homothety_fit(const ConvexBody& body, const ConvexBody& base, int samples, std::uint64_t seed) {
  const int n = body.dim();
  if (base.dim() != n) throw std::invalid_argument("homothety_fit: bodies differ in dimension");
  if (samples < n + 1) throw std::invalid_argument("homothety_fit: needs at least n+1 samples");
  Rng rng(seed);
  Eigen::MatrixXd a(samples, n + 1);
  Eigen::VectorXd rhs(samples);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd u = random_direction(n, rng);
    a(s, 0) = base.support(u);
    a.row(s).tail(n) = u.transpose();
    rhs(s) = body.support(u);
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
  return {x(0), x.tail(n), (a * x - rhs).cwiseAbs().maxCoeff()};
}

}  // namespace cvxtomo
