#pragma once

// Convex bodies given by support functions h: R^n \ {0} -> R, homogeneous of
// degree one, with first and second derivatives. Bodies are immutable values
// that share their (immutable) parameter trees.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cvxtomo/frame.hpp"

namespace cvxtomo {

struct SupportJet {
  double value = 0.0;
  Eigen::VectorXd gradient;  // at unit u: the boundary point with outer normal u
  Eigen::MatrixXd hessian;
};

// Profile g(t), t in [-1,1], of a zonal support function h(x) = |x| g(<x,e>/|x|),
// with its first two derivatives.
struct Profile {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  std::vector<double> polynomial;  // coefficients c_0, c_1, ... when polynomial
  bool numeric_derivatives = false;

  static Profile from_polynomial(std::vector<double> coeffs);
  static Profile analytic(std::function<double(double)> g, std::function<double(double)> dg,
                          std::function<double(double)> d2g);
  // Opt-in: derivatives of g by central differences with the given step.
  // g must be defined on [-1-step, 1+step].
  static Profile with_numeric_derivatives(std::function<double(double)> g, double step = 1e-4);
  // sqrt(a^2 (1-t^2) + b^2 t^2): the spheroid with equatorial radius a, polar radius b.
  static Profile spheroid(double equatorial, double polar);
};

class ConvexBody;

namespace family {

struct Ball {
  int dim;
  double radius;
};
struct Ellipsoid {
  Eigen::MatrixXd shape;  // h(x) = sqrt(x^T A x)
};
struct Spheroid {
  Eigen::VectorXd axis;
  double equatorial;
  double polar;
  Eigen::MatrixXd shape;
};
struct Revolution {
  Eigen::VectorXd axis;
  Profile profile;
};
// base + eps |x| p(<x,e>/|x|), p(t) = sum_j odd_coeffs[j] t^(2j+1), degree <= 7.
struct HarmonicPerturbation {
  std::shared_ptr<const ConvexBody> base;
  Eigen::VectorXd axis;
  std::vector<double> odd_coeffs;
  double epsilon;
};
struct MinkowskiSum {
  std::vector<ConvexBody> members;
};
struct Homothet {
  std::shared_ptr<const ConvexBody> base;
  double lambda;
  Eigen::VectorXd translation;
};
// h - r0 on unit vectors, i.e. h(x) - r0 |x|.
struct Erosion {
  std::shared_ptr<const ConvexBody> base;
  double radius;
};
// K|U in intrinsic coordinates of U: h(F w) for an orthonormal n x k frame F.
struct Projection {
  std::shared_ptr<const ConvexBody> base;
  Eigen::MatrixXd frame;
};

}  // namespace family

using BodyData = std::variant<family::Ball, family::Ellipsoid, family::Spheroid, family::Revolution,
                              family::HarmonicPerturbation, family::MinkowskiSum, family::Homothet,
                              family::Erosion, family::Projection>;

class ConvexBody {
public:
  static ConvexBody ball(int dim, double radius);
  static ConvexBody ellipsoid(const Eigen::MatrixXd& shape);
  static ConvexBody spheroid(const Eigen::VectorXd& axis, double equatorial, double polar);
  static ConvexBody revolution(const Eigen::VectorXd& axis, Profile profile);
  static ConvexBody harmonic_perturbation(const ConvexBody& base, const Eigen::VectorXd& axis,
                                          std::vector<double> odd_coeffs, double epsilon);
  static ConvexBody minkowski_sum(std::vector<ConvexBody> members);
  static ConvexBody homothet(const ConvexBody& base, double lambda, const Eigen::VectorXd& translation);
  static ConvexBody erosion(const ConvexBody& base, double radius);
  static ConvexBody projection(const ConvexBody& base, const Eigen::MatrixXd& frame);

  int dim() const { return dim_; }
  const BodyData& data() const { return *data_; }
  std::string family_name() const;

  // h(x) for nonzero x; throws std::invalid_argument at x = 0.
  double support(const Eigen::VectorXd& x) const;
  // Value, gradient and Hessian of h at nonzero x.
  SupportJet jet(const Eigen::VectorXd& x) const;

  // Axis of rotational symmetry declared by the family, if any. Balls declare none.
  std::optional<Eigen::VectorXd> declared_axis() const;
  // True when h is invariant under rotations fixing the line through e (up
  // to a linear term, which does not affect the Hessian).
  bool symmetric_about(const Eigen::VectorXd& axis) const;

private:
  ConvexBody(int dim, std::shared_ptr<const BodyData> data) : dim_(dim), data_(std::move(data)) {}
  void check_point(const Eigen::VectorXd& x) const;

  int dim_ = 0;
  std::shared_ptr<const BodyData> data_;
};

inline double support(const ConvexBody& body, const Eigen::VectorXd& x) { return body.support(x); }
inline SupportJet jet(const ConvexBody& body, const Direction& u) { return body.jet(u.vec()); }

// h(u) + h(-u)
double width(const ConvexBody& body, const Direction& u);

// Central-difference jet: gradient from support values, Hessian from
// differences of gradients, symmetrized as (H + H^T)/2.
SupportJet finite_difference_jet(const ConvexBody& body, const Eigen::VectorXd& x, double step = 1e-5);

struct ValidationReport {
  double min_radius = 0.0;  // smallest radius of curvature over the sample
  double max_radius = 0.0;
  Eigen::VectorXd argmin;   // direction attaining min_radius
  int samples = 0;
  bool is_c2_plus = false;  // min_radius > 0: a sampled certificate only
};

// Radii of curvature (eigenvalues of the Hessian restricted to u-perp) over
// `samples` Haar-random directions.
ValidationReport validate(const ConvexBody& body, int samples, std::uint64_t seed);

// Radii of curvature at u, ascending.
Eigen::VectorXd radii_of_curvature(const ConvexBody& body, const Direction& u);

// p(t) = sum_j c_j t^(2j+1) and its first two derivatives.
double odd_poly(const std::vector<double>& c, double t, int derivative = 0);

}  // namespace cvxtomo
