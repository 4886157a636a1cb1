#pragma once

// Reverse Weingarten maps L(h)(u) = d^2 h(u) restricted to u-perp, the
// relative maps L_{h0}(h)(u) = L(h0)^{-1/2} L(h) L(h0)^{-1/2}, and the checks
// built on them: the wedge identity, eigenvalue profiles, antipodal umbilic
// search and the eigenstructure of bodies of revolution.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvxtomo/body.hpp"
#include "cvxtomo/frame.hpp"
#include "cvxtomo/multilinear.hpp"

namespace cvxtomo {

// Orthonormal basis of u-perp. The same basis serves u and -u, so maps at
// antipodal points are written on one space.
struct TangentFrame {
  Direction u;
  Eigen::MatrixXd basis;  // n x (n-1)

  static TangentFrame householder(const Direction& u) { return {u, householder_tangent_basis(u.vec())}; }
  static TangentFrame gram_schmidt(const Direction& u) { return {u, gram_schmidt_tangent_basis(u.vec())}; }
  TangentFrame antipode() const { return {-u, basis}; }
};

struct SelfAdjointMap {
  TangentFrame frame;
  Eigen::MatrixXd matrix;  // symmetric, (n-1) x (n-1)

  Eigen::VectorXd eigenvalues() const;  // ascending
  double determinant() const { return matrix.determinant(); }
};

SelfAdjointMap reverse_weingarten(const ConvexBody& body, const TangentFrame& frame);
inline SelfAdjointMap reverse_weingarten(const ConvexBody& body, const Direction& u) {
  return reverse_weingarten(body, TangentFrame::householder(u));
}

struct SpdRoots {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};
// Square root of a symmetric positive definite matrix by eigendecomposition.
// Throws PreconditionError when an eigenvalue is below `floor`.
SpdRoots spd_roots(const Eigen::MatrixXd& a, double floor = 1e-12);

SelfAdjointMap relative_map(const ConvexBody& body, const ConvexBody& base, const TangentFrame& frame);
inline SelfAdjointMap relative_map(const ConvexBody& body, const ConvexBody& base, const Direction& u) {
  return relative_map(body, base, TangentFrame::householder(u));
}

// Throws PreconditionError unless h(v) = h(-v) (relative tol) at u and at a
// fixed deterministic sample of directions.
void require_central_symmetry(const ConvexBody& body, const Direction& u, double tol = 1e-10);

// || ^k L(h)(u) + ^k L(h)(-u) - 2 beta ^k L(h0)(u) ||_2 on one basis of u-perp.
double wedge_identity_defect(const ConvexBody& body, const ConvexBody& base, int k, double beta,
                             const Direction& u);

struct RelativeWedgeResult {
  double defect = 0.0;
  // Common eigenbasis of L_{h0}(h)(u), L_{h0}(h)(-u), attempted when k <= n-2
  // and the defect is below tol.
  std::optional<CommonEigenbasis> eigenbasis;
  std::string eigenbasis_note;
};

RelativeWedgeResult relative_wedge_defect(const ConvexBody& body, const ConvexBody& base, int k, double beta,
                                          const Direction& u, double tol = 1e-8);

struct EigenProfile {
  Eigen::VectorXd values;  // ascending
};

EigenProfile eigen_profile(const ConvexBody& body, const ConvexBody& base, const TangentFrame& frame);
inline EigenProfile eigen_profile(const ConvexBody& body, const ConvexBody& base, const Direction& u) {
  return eigen_profile(body, base, TangentFrame::householder(u));
}

struct UmbilicResult {
  Direction u0 = Direction::axis(1, 0);
  double r0 = 0.0;
  double defect = 0.0;    // max ||L_{h0}(h)(+-u0) - r0 id||_2
  double r_defect = 0.0;  // ||R(u0) - R(-u0)||
  bool umbilic = false;   // defect < tol and r0 > 0
  bool converged = true;  // search only
  int evaluations = 0;    // search only
  // Boundary points of K with outer normals +u0 and -u0; their tangent planes
  // are parallel, at distance `separation` = h(u0) + h(-u0).
  Eigen::VectorXd boundary_plus;
  Eigen::VectorXd boundary_minus;
  double separation = 0.0;
};

UmbilicResult umbilic_check(const ConvexBody& body, const ConvexBody& base, const Direction& u0, double tol = 1e-6);

enum class SearchObjective {
  // ||R(u) - R(-u)|| only: a zero finder whose zeros Borsuk-Ulam guarantees.
  antipodal,
  // ||R(u) - R(-u)|| + spread R(u) + spread R(-u): relative umbilic pairs.
  umbilic_pair,
};

struct SearchOptions {
  std::uint64_t seed = 0;
  int budget = 2000;           // grid points on the closed upper hemisphere
  int refine_starts = 4;       // best grid points handed to the local search
  int max_refine_evals = 0;    // per start; 0 means 10 * budget
  double tol = 1e-6;
  SearchObjective objective = SearchObjective::umbilic_pair;
  unsigned threads = 1;
};

UmbilicResult antipodal_search(const ConvexBody& body, const ConvexBody& base, const SearchOptions& options);

// Grid used by antipodal_search: spherical Fibonacci points for n = 3,
// seeded Haar points otherwise, all with last coordinate >= 0.
std::vector<Eigen::VectorXd> hemisphere_grid(int n, int count, std::uint64_t seed);

struct RevolutionEigenstructure {
  double phi = 0.0;                  // u = cos(phi) v0 + sin(phi) e
  double x1 = 0.0;                   // eigenvalue on -sin(phi) v0 + cos(phi) e
  double x = 0.0;                    // (n-2)-fold eigenvalue on e-perp cap v0-perp
  double eigenvector_residual = 0.0; // ||L w - x1 w||
  double multiplicity_defect = 0.0;  // ||L restricted to e-perp cap v0-perp - x id||_2
};

// Requires a body symmetric about `axis` (defaults to the declared axis) and u != +-axis.
RevolutionEigenstructure revolution_eigenstructure(const ConvexBody& body, const Direction& u,
                                                   std::optional<Eigen::VectorXd> axis = std::nullopt);

struct RevolutionRelations {
  double first = 0.0;        // |x1 x^{i-1} + x1 x^{i-1} - 2 alpha y1 y^{i-1}|
  double second = 0.0;       // |x^i + x^i - 2 alpha y^i|
  double third = 0.0;        // |x1 x^{n-2} + x1 x^{n-2} - 2 beta y1 y^{n-2}|
  double consequence = 0.0;  // |alpha^{n-1} - beta^i|
  double max() const;
};

// Evaluated at an equatorial u (<u,e> = 0) where L(h)(+-u) share the
// rotational eigenbasis; i in {1, n-2}.
RevolutionRelations revolution_relations_check(const ConvexBody& body, const ConvexBody& base, int i,
                                               double alpha, double beta, const Direction& u);

struct DetRatioReport {
  double mean = 0.0;
  double max_relative_deviation = 0.0;
  std::vector<double> ratios;
};

// det L(h)(u) / det L(h0)(u) over Haar-random u.
DetRatioReport det_ratio_constancy(const ConvexBody& body, const ConvexBody& base, int samples, std::uint64_t seed);

}  // namespace cvxtomo
