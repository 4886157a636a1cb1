#pragma once

// Grassmannian sampling, shadows K|U and their k-volumes computed from the
// support function, and the proportionality tests built on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvxtomo/body.hpp"

namespace cvxtomo {

struct SubspaceFrame {
  int n = 0;
  int k = 0;
  Eigen::MatrixXd columns;  // n x k, orthonormal
};

// Haar-random k-plane of R^n, deterministic per seed.
SubspaceFrame random_subspace(int n, int k, std::uint64_t seed);

// Coordinate plane span{e_i : i in axes}.
SubspaceFrame coordinate_subspace(int n, const std::vector<int>& axes);

// K|U as a k-dimensional body with h(w) = h_K(F w).
inline ConvexBody project(const ConvexBody& body, const SubspaceFrame& frame) {
  return ConvexBody::projection(body, frame.columns);
}

// The shadow rewritten in closed form for families where one exists (balls,
// ellipsoids, homothets and sums of such); nullopt otherwise.
std::optional<ConvexBody> intrinsic(const ConvexBody& body, const SubspaceFrame& frame);

struct Quadrature {
  int nodes = 256;  // k=2: circle nodes; k=3: Gauss-Legendre nodes in cos(theta); k>=4: samples
  std::uint64_t seed = 0;  // k>=4 only
};

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct VolumeEstimate {
  double value = 0.0;
  double standard_error = 0.0;  // zero for the deterministic rules
};

// V_k of a k-dimensional body: h(w) + h(-w) for k = 1, otherwise
// (1/k) * integral over S^{k-1} of h det L(h).
VolumeEstimate volume_estimate(const ConvexBody& kbody, const Quadrature& quadrature = {});
inline double volume_from_support(const ConvexBody& kbody, const Quadrature& quadrature = {}) {
  return volume_estimate(kbody, quadrature).value;
}

struct ProjectionSample {
  SubspaceFrame frame;
  double volume = 0.0;
};

// Frame s is drawn from stream_seed(seed, s).
std::vector<ProjectionSample> projection_function(const ConvexBody& body, int k, int num_frames, std::uint64_t seed,
                                                  const Quadrature& quadrature = {}, unsigned threads = 1);

struct ProportionalityReport {
  double alpha = 0.0;  // median ratio
  double max_relative_deviation = 0.0;
  std::vector<double> ratios;         // NaN at excluded samples
  std::vector<SubspaceFrame> frames;
  std::vector<int> excluded;          // samples with a degenerate shadow of K0
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
};

ProportionalityReport proportionality_test(const ConvexBody& body, const ConvexBody& base, int k, int num_frames,
                                           std::uint64_t seed, const Quadrature& quadrature = {},
                                           unsigned threads = 1);

// max_s |(V_j(K0|U_s)/V_j(K|U_s))^{1/j} - (V_i(K0|L_s)/V_i(K|L_s))^{1/i}|
// with L_s in G(n,i), U_s in G(n,j).
double ratio_consistency_check(const ConvexBody& body, const ConvexBody& base, int i, int j, int num_frames,
                               std::uint64_t seed, const Quadrature& quadrature = {});

struct HomothetyFit {
  double lambda = 0.0;
  Eigen::VectorXd translation;
  double residual = 0.0;  // max |h_K(u) - lambda h_K0(u) - <t,u>|
};

HomothetyFit homothety_fit(const ConvexBody& body, const ConvexBody& base, int samples, std::uint64_t seed);

}  // namespace cvxtomo
