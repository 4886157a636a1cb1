#include "cvxtomo/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvxtomo/random.hpp"

namespace cvxtomo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double horner(const std::vector<double>& c, double t) {
  double out = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * t + *it;
  return out;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> out;
  for (std::size_t i = 1; i < c.size(); ++i) out.push_back(static_cast<double>(i) * c[i]);
  return out;
}

// h(x) = |x| g(t), t = <x,e>/|x|. With x^ = x/|x|, P = I - x^ x^^T and
// w = e - t x^:
//   grad = g x^ + g' w,   hess = ((g - t g') P + g'' w w^T) / |x|.
SupportJet zonal_jet(const Eigen::VectorXd& x, const Eigen::VectorXd& e, double g, double dg,
                     double d2g) {
  const double rho = x.norm();
  const Eigen::VectorXd xh = x / rho;
  const double t = std::clamp(xh.dot(e), -1.0, 1.0);
  const Eigen::VectorXd w = e - t * xh;
  const auto n = x.size();
  const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n) - xh * xh.transpose();
  SupportJet out;
  out.value = rho * g;
  out.gradient = g * xh + dg * w;
  out.hessian = ((g - t * dg) * p + d2g * w * w.transpose()) / rho;
  return out;
}

double zonal_t(const Eigen::VectorXd& x, const Eigen::VectorXd& e) {
  return std::clamp(x.dot(e) / x.norm(), -1.0, 1.0);
}

SupportJet scaled(SupportJet j, double s) {
  j.value *= s;
  j.gradient *= s;
  j.hessian *= s;
  return j;
}

Eigen::VectorXd unit_axis(const Eigen::VectorXd& axis) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("axis must be a nonzero vector");
  return axis / norm;
}

bool parallel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::abs(std::abs(a.normalized().dot(b.normalized())) - 1.0) < 1e-12;
}

}  // namespace

Profile Profile::from_polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("profile polynomial needs at least one coefficient");
  Profile p;
  const auto d1 = derivative(coeffs);
  const auto d2 = derivative(d1);
  p.g = [coeffs](double t) { return horner(coeffs, t); };
  p.dg = [d1](double t) { return horner(d1, t); };
  p.d2g = [d2](double t) { return horner(d2, t); };
  p.polynomial = std::move(coeffs);
  return p;
}

Profile Profile::analytic(std::function<double(double)> g, std::function<double(double)> dg,
                          std::function<double(double)> d2g) {
  if (!g || !dg || !d2g) throw std::invalid_argument("analytic profile needs g, g' and g''");
  Profile p;
  p.g = std::move(g);
  p.dg = std::move(dg);
  p.d2g = std::move(d2g);
  return p;
}

Profile Profile::with_numeric_derivatives(std::function<double(double)> g, double step) {
  if (!g) throw std::invalid_argument("profile needs g");
  if (!(step > 0.0)) throw std::invalid_argument("profile step must be positive");
  Profile p;
  p.g = g;
  p.dg = [g, step](double t) { return (g(t + step) - g(t - step)) / (2 * step); };
  p.d2g = [g, step](double t) { return (g(t + step) - 2 * g(t) + g(t - step)) / (step * step); };
  p.numeric_derivatives = true;
  return p;
}

Profile Profile::spheroid(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("spheroid radii must be positive");
  const double a2 = a * a, c = b * b - a * a;
  return analytic([=](double t) { return std::sqrt(a2 + c * t * t); },
                  [=](double t) { return c * t / std::sqrt(a2 + c * t * t); },
                  [=](double t) {
                    const double s = a2 + c * t * t;
                    return c * a2 / (s * std::sqrt(s));
                  });
}

double odd_poly(const std::vector<double>& c, double t, int derivative_order) {
  double out = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const int p = static_cast<int>(2 * j + 1);
    if (derivative_order == 0) out += c[j] * std::pow(t, p);
    else if (derivative_order == 1) out += c[j] * p * std::pow(t, p - 1);
    else if (p >= 2) out += c[j] * p * (p - 1) * std::pow(t, p - 2);
  }
  return out;
}

ConvexBody ConvexBody::ball(int dim, double radius) {
  if (dim < 1) throw std::invalid_argument("ball: dimension must be >= 1");
  if (!(radius >= 0.0)) throw std::invalid_argument("ball: radius must be nonnegative");
  return ConvexBody(dim, std::make_shared<const BodyData>(family::Ball{dim, radius}));
}

ConvexBody ConvexBody::ellipsoid(const Eigen::MatrixXd& shape) {
  if (shape.rows() != shape.cols() || shape.rows() < 1)
    throw std::invalid_argument("ellipsoid: shape matrix must be square");
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, shape.norm()))
    throw std::invalid_argument("ellipsoid: shape matrix must be symmetric");
  const Eigen::MatrixXd sym = (shape + shape.transpose()) / 2.0;
  if (Eigen::LLT<Eigen::MatrixXd>(sym).info() != Eigen::Success)
    throw std::invalid_argument("ellipsoid: shape matrix must be positive definite");
  return ConvexBody(static_cast<int>(shape.rows()),
                    std::make_shared<const BodyData>(family::Ellipsoid{sym}));
}

ConvexBody ConvexBody::spheroid(const Eigen::VectorXd& axis, double equatorial, double polar) {
  if (!(equatorial > 0.0) || !(polar > 0.0))
    throw std::invalid_argument("spheroid: radii must be positive");
  const Eigen::VectorXd e = unit_axis(axis);
  const auto n = e.size();
  Eigen::MatrixXd shape = equatorial * equatorial * Eigen::MatrixXd::Identity(n, n) +
                          (polar * polar - equatorial * equatorial) * e * e.transpose();
  return ConvexBody(static_cast<int>(n), std::make_shared<const BodyData>(
                                             family::Spheroid{e, equatorial, polar, shape}));
}

ConvexBody ConvexBody::revolution(const Eigen::VectorXd& axis, Profile profile) {
  if (!profile.g || !profile.dg || !profile.d2g)
    throw std::invalid_argument("revolution: profile must supply g, g' and g''");
  const Eigen::VectorXd e = unit_axis(axis);
  return ConvexBody(static_cast<int>(e.size()),
                    std::make_shared<const BodyData>(family::Revolution{e, std::move(profile)}));
}

ConvexBody ConvexBody::harmonic_perturbation(const ConvexBody& base, const Eigen::VectorXd& axis,
                                             std::vector<double> odd_coeffs, double epsilon) {
  if (axis.size() != base.dim()) throw std::invalid_argument("harmonic_perturbation: axis dimension mismatch");
  if (odd_coeffs.empty() || odd_coeffs.size() > 4)
    throw std::invalid_argument("harmonic_perturbation: 1 to 4 odd coefficients (degree <= 7)");
  return ConvexBody(base.dim(), std::make_shared<const BodyData>(family::HarmonicPerturbation{
                                    std::make_shared<const ConvexBody>(base), unit_axis(axis),
                                    std::move(odd_coeffs), epsilon}));
}

ConvexBody ConvexBody::minkowski_sum(std::vector<ConvexBody> members) {
  if (members.empty()) throw std::invalid_argument("minkowski_sum: needs at least one member");
  const int n = members.front().dim();
  for (const auto& m : members)
    if (m.dim() != n) throw std::invalid_argument("minkowski_sum: members differ in dimension");
  return ConvexBody(n, std::make_shared<const BodyData>(family::MinkowskiSum{std::move(members)}));
}

ConvexBody ConvexBody::homothet(const ConvexBody& base, double lambda, const Eigen::VectorXd& translation) {
  if (!(lambda > 0.0)) throw std::invalid_argument("homothet: lambda must be positive");
  if (translation.size() != base.dim()) throw std::invalid_argument("homothet: translation dimension mismatch");
  return ConvexBody(base.dim(), std::make_shared<const BodyData>(family::Homothet{
                                    std::make_shared<const ConvexBody>(base), lambda, translation}));
}

ConvexBody ConvexBody::erosion(const ConvexBody& base, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("erosion: radius must be nonnegative");
  return ConvexBody(base.dim(), std::make_shared<const BodyData>(
                                    family::Erosion{std::make_shared<const ConvexBody>(base), radius}));
}

ConvexBody ConvexBody::projection(const ConvexBody& base, const Eigen::MatrixXd& frame) {
  if (frame.rows() != base.dim() || frame.cols() < 1 || frame.cols() > frame.rows())
    throw std::invalid_argument("projection: frame must be n x k with 1 <= k <= n");
  const Eigen::MatrixXd gram = frame.transpose() * frame;
  if ((gram - Eigen::MatrixXd::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("projection: frame columns must be orthonormal");
  return ConvexBody(static_cast<int>(frame.cols()),
                    std::make_shared<const BodyData>(
                        family::Projection{std::make_shared<const ConvexBody>(base), frame}));
}

std::string ConvexBody::family_name() const {
  return std::visit(overloaded{
                        [](const family::Ball&) { return "ball"; },
                        [](const family::Ellipsoid&) { return "ellipsoid"; },
                        [](const family::Spheroid&) { return "spheroid"; },
                        [](const family::Revolution&) { return "revolution"; },
                        [](const family::HarmonicPerturbation&) { return "harmonic_perturbation"; },
                        [](const family::MinkowskiSum&) { return "minkowski_sum"; },
                        [](const family::Homothet&) { return "homothet"; },
                        [](const family::Erosion&) { return "erosion"; },
                        [](const family::Projection&) { return "projection"; },
                    },
                    *data_);
}

void ConvexBody::check_point(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("support: point of dimension " + std::to_string(x.size()) +
                                " for a body in dimension " + std::to_string(dim_));
  if (!(x.norm() > 0.0)) throw std::invalid_argument("support: h is only evaluated away from the origin");
}

double ConvexBody::support(const Eigen::VectorXd& x) const {
  check_point(x);
  return std::visit(
      overloaded{
          [&](const family::Ball& b) { return b.radius * x.norm(); },
          [&](const family::Ellipsoid& e) { return std::sqrt(x.dot(e.shape * x)); },
          [&](const family::Spheroid& s) { return std::sqrt(x.dot(s.shape * x)); },
          [&](const family::Revolution& r) { return x.norm() * r.profile.g(zonal_t(x, r.axis)); },
          [&](const family::HarmonicPerturbation& p) {
            return p.base->support(x) + p.epsilon * x.norm() * odd_poly(p.odd_coeffs, zonal_t(x, p.axis));
          },
          [&](const family::MinkowskiSum& s) {
            double sum = 0.0;
            for (const auto& m : s.members) sum += m.support(x);
            return sum;
          },
          [&](const family::Homothet& h) { return h.lambda * h.base->support(x) + h.translation.dot(x); },
          [&](const family::Erosion& e) { return e.base->support(x) - e.radius * x.norm(); },
          [&](const family::Projection& p) { return p.base->support(p.frame * x); },
      },
      *data_);
}

SupportJet ConvexBody::jet(const Eigen::VectorXd& x) const {
  check_point(x);
  const auto n = x.size();
  return std::visit(
      overloaded{
          [&](const family::Ball& b) {
            return zonal_jet(x, Eigen::VectorXd::Unit(n, 0), b.radius, 0.0, 0.0);
          },
          [&](const family::Ellipsoid& e) {
            const Eigen::VectorXd ax = e.shape * x;
            const double h = std::sqrt(x.dot(ax));
            return SupportJet{h, ax / h, (e.shape - ax * ax.transpose() / (h * h)) / h};
          },
          [&](const family::Spheroid& s) {
            const Eigen::VectorXd ax = s.shape * x;
            const double h = std::sqrt(x.dot(ax));
            return SupportJet{h, ax / h, (s.shape - ax * ax.transpose() / (h * h)) / h};
          },
          [&](const family::Revolution& r) {
            const double t = zonal_t(x, r.axis);
            return zonal_jet(x, r.axis, r.profile.g(t), r.profile.dg(t), r.profile.d2g(t));
          },
          [&](const family::HarmonicPerturbation& p) {
            SupportJet out = p.base->jet(x);
            const double t = zonal_t(x, p.axis);
            const SupportJet z = scaled(zonal_jet(x, p.axis, odd_poly(p.odd_coeffs, t, 0),
                                                  odd_poly(p.odd_coeffs, t, 1), odd_poly(p.odd_coeffs, t, 2)),
                                        p.epsilon);
            out.value += z.value;
            out.gradient += z.gradient;
            out.hessian += z.hessian;
            return out;
          },
          [&](const family::MinkowskiSum& s) {
            SupportJet out{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
            for (const auto& m : s.members) {
              const SupportJet j = m.jet(x);
              out.value += j.value;
              out.gradient += j.gradient;
              out.hessian += j.hessian;
            }
            return out;
          },
          [&](const family::Homothet& h) {
            SupportJet out = scaled(h.base->jet(x), h.lambda);
            out.value += h.translation.dot(x);
            out.gradient += h.translation;
            return out;
          },
          [&](const family::Erosion& e) {
            SupportJet out = e.base->jet(x);
            const SupportJet ball = zonal_jet(x, Eigen::VectorXd::Unit(n, 0), e.radius, 0.0, 0.0);
            out.value -= ball.value;
            out.gradient -= ball.gradient;
            out.hessian -= ball.hessian;
            return out;
          },
          [&](const family::Projection& p) {
            const SupportJet j = p.base->jet(p.frame * x);
            return SupportJet{j.value, p.frame.transpose() * j.gradient,
                              p.frame.transpose() * j.hessian * p.frame};
          },
      },
      *data_);
}

std::optional<Eigen::VectorXd> ConvexBody::declared_axis() const {
  return std::visit(overloaded{
                        [](const family::Spheroid& s) -> std::optional<Eigen::VectorXd> { return s.axis; },
                        [](const family::Revolution& r) -> std::optional<Eigen::VectorXd> { return r.axis; },
                        [](const family::HarmonicPerturbation& p) -> std::optional<Eigen::VectorXd> {
                          return p.axis;
                        },
                        [](const family::MinkowskiSum& s) -> std::optional<Eigen::VectorXd> {
                          for (const auto& m : s.members)
                            if (auto a = m.declared_axis()) return a;
                          return std::nullopt;
                        },
                        [](const family::Homothet& h) { return h.base->declared_axis(); },
                        [](const family::Erosion& e) { return e.base->declared_axis(); },
                        [](const auto&) -> std::optional<Eigen::VectorXd> { return std::nullopt; },
                    },
                    *data_);
}

bool ConvexBody::symmetric_about(const Eigen::VectorXd& axis) const {
  if (axis.size() != dim_ || !(axis.norm() > 0.0)) return false;
  const Eigen::VectorXd e = axis.normalized();
  return std::visit(
      overloaded{
          [](const family::Ball&) { return true; },
          [&](const family::Ellipsoid& el) {
            const auto n = e.size();
            const double along = e.dot(el.shape * e);
            const double across = n > 1 ? (el.shape.trace() - along) / static_cast<double>(n - 1) : 0.0;
            const Eigen::MatrixXd model = across * Eigen::MatrixXd::Identity(n, n) + (along - across) * e * e.transpose();
            return (el.shape - model).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, el.shape.norm());
          },
          [&](const family::Spheroid& s) { return parallel(s.axis, e); },
          [&](const family::Revolution& r) { return parallel(r.axis, e); },
          [&](const family::HarmonicPerturbation& p) {
            return parallel(p.axis, e) && p.base->symmetric_about(e);
          },
          [&](const family::MinkowskiSum& s) {
            return std::all_of(s.members.begin(), s.members.end(),
                               [&](const ConvexBody& m) { return m.symmetric_about(e); });
          },
          [&](const family::Homothet& h) { return h.base->symmetric_about(e); },
          [&](const family::Erosion& er) { return er.base->symmetric_about(e); },
          [](const family::Projection&) { return false; },
      },
      *data_);
}

double width(const ConvexBody& body, const Direction& u) {
  return body.support(u.vec()) + body.support(-u.vec());
}

SupportJet finite_difference_jet(const ConvexBody& body, const Eigen::VectorXd& x, double step) {
  const auto n = x.size();
  SupportJet out;
  out.value = body.support(x);
  out.gradient.resize(n);
  out.hessian.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd dx = step * Eigen::VectorXd::Unit(n, i);
    out.gradient(i) = (body.support(x + dx) - body.support(x - dx)) / (2 * step);
    out.hessian.col(i) = (body.jet(x + dx).gradient - body.jet(x - dx).gradient) / (2 * step);
  }
  out.hessian = (out.hessian + out.hessian.transpose()).eval() / 2.0;
  return out;
}

Eigen::VectorXd radii_of_curvature(const ConvexBody& body, const Direction& u) {
  if (body.dim() < 2) return Eigen::VectorXd();
  const Eigen::MatrixXd basis = householder_tangent_basis(u.vec());
  const Eigen::MatrixXd restricted = basis.transpose() * body.jet(u.vec()).hessian * basis;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>((restricted + restricted.transpose()) / 2.0,
                                                        Eigen::EigenvaluesOnly)
      .eigenvalues();
}

ValidationReport validate(const ConvexBody& body, int samples, std::uint64_t seed) {
  if (body.dim() < 2) throw std::invalid_argument("validate: needs dimension >= 2");
  if (samples < 1) throw std::invalid_argument("validate: needs at least one sample");
  Rng rng(seed);
  ValidationReport report;
  report.samples = samples;
  report.min_radius = std::numeric_limits<double>::infinity();
  report.max_radius = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Direction u(random_direction(body.dim(), rng));
    const Eigen::VectorXd radii = radii_of_curvature(body, u);
    if (radii(0) < report.min_radius) {
      report.min_radius = radii(0);
      report.argmin = u.vec();
    }
    report.max_radius = std::max(report.max_radius, radii(radii.size() - 1));
  }
  report.is_c2_plus = report.min_radius > 0.0;
  return report;
}

}  // namespace cvxtomo
