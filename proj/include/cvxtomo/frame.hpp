#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace cvxtomo {

// Unit vector of R^n.
class Direction {
public:
  // Normalizes v; throws on the zero vector.
  explicit Direction(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("Direction: zero or non-finite vector");
    coords_ = v / norm;
  }

  static Direction axis(Eigen::Index n, Eigen::Index i) { return Direction(Eigen::VectorXd::Unit(n, i)); }

  const Eigen::VectorXd& vec() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_(i); }
  Direction operator-() const { return Direction(-coords_); }

private:
  Direction() = default;
  Eigen::VectorXd coords_;
};

// Columns 2..n of the Householder reflection that maps e_1 to u: an
// orthonormal basis of u-perp that depends only on u.
inline Eigen::MatrixXd householder_tangent_basis(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::VectorXd v = -u;
  // v = e_1 - u, with 1 - u_1 evaluated without cancellation near u = e_1
  const double tail = u.tail(n - 1).squaredNorm();
  v(0) = u(0) > 0.0 ? tail / (1.0 + u(0)) : 1.0 - u(0);
  const double vv = v.squaredNorm();
  Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(n, n);
  if (vv > 0.0) reflect -= (2.0 / vv) * v * v.transpose();
  return reflect.rightCols(n - 1);
}

// Gram-Schmidt of e_1..e_n against u, dropping the most dependent axis. A
// second frame rule, used to check that spectra do not depend on the frame.
inline Eigen::MatrixXd gram_schmidt_tangent_basis(const Eigen::VectorXd& u) {
  const Eigen::Index n = u.size();
  Eigen::Index drop = 0;
  u.cwiseAbs().maxCoeff(&drop);
  Eigen::MatrixXd out(n, n - 1);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == drop) continue;
    Eigen::VectorXd w = Eigen::VectorXd::Unit(n, i);
    w -= u.dot(w) * u;
    for (Eigen::Index j = 0; j < col; ++j) w -= out.col(j).dot(w) * out.col(j);
    out.col(col++) = w.normalized();
  }
  return out;
}

}  // namespace cvxtomo
