#pragma once

// Polynomial relations between two lists of numbers: residuals of the
// subset-product hypotheses, the finite candidate sets their solutions live
// in, numerical solvers that look for solutions, and falsification searches.
// Index sets are subsets of {1..N}; x_I denotes the product of x_i over I.

#include <cstdint>
#include <string>
#include <vector>

#include "cvxtomo/polynomial.hpp"

namespace cvxtomo {

struct RelationInstance {
  std::vector<double> x;  // nonnegative
  std::vector<double> y;  // positive
  double a = 1.0;
  double b = 1.0;
  int k = 1;
  int m = 2;

  int size() const { return static_cast<int>(x.size()); }
};

struct HypothesisResidual {
  double k_residual = 0.0;  // max_{|I|=k} |x_I + y_I - 2a|
  double m_residual = 0.0;  // max_{|J|=m} |x_J + y_J - 2b|
  double max() const { return k_residual > m_residual ? k_residual : m_residual; }
};

// Exact maximum over every k- and m-subset; throws on malformed instances.
HypothesisResidual hypothesis_residual(const RelationInstance& inst);

// |a^m - b^k| must exceed tol * max(1, a^m, b^k); throws PreconditionError otherwise.
void require_exponent_gap(double a, double b, int k, int m, double tol);

// For 2 <= k: requires residuals below tol, the exponent gap and x > 0, then
// tests whether x_i / y_i is constant within sqrt(tol) * max(1, c).
bool ratio_conclusion_check(const RelationInstance& inst, double tol = 1e-9);

// a = b = 1, x = (1,..,1,t), y = (1,..,1,2-t); every subset identity holds.
RelationInstance infinite_family(double t, int n, int k = 1, int m = -1);

struct Candidate {
  double y = 0.0;
  double x = 0.0;  // the matching x-value, NaN when the branch does not fix it
  std::string branch;
};

struct CandidateSet {
  double a = 0.0, b = 0.0;
  int k = 0, m = 0, n = 0;
  std::vector<Candidate> members;

  // Distance from v to the nearest candidate y-value (infinity when empty).
  double distance(double v) const;
  bool contains(double v, double tol) const { return distance(v) <= tol; }
};

// Case-2 polynomial in t for k = 1 and 2 <= l <= n-2, exact coefficients:
// (2a)^{n-1} [t^{(l-1)(n-l)} + t^{(l-1)(n-l-1)}] - 2b (1+t^{n-l-1})^{l-1} (1+t^{l-1})^{n-l}.
Polynomial<double> split_polynomial(double a, double b, int n, int l);
int split_polynomial_exact_degree(double a, double b, int n, int l);

// x^{n-1} + (2a-x)^{n-1} - 2b (k = 1, all x equal).
Polynomial<double> constant_polynomial(double a, double b, int n);

// (2a - x^k)^{n-1} - (2b - x^{n-1})^k (2 <= k).
Polynomial<double> power_polynomial(double a, double b, int k, int n);

// Candidate y-values of every branch; requires m = n-1 and the exponent gap.
CandidateSet enumerate_candidates(double a, double b, int k, int m, int n, double gap_tol = 1e-9);

struct SolverOptions {
  int restarts = 1000;
  int max_iterations = 200;
  double accept = 1e-12;  // residual for an accepted solution
  double min_y = 1e-6;    // solutions with smaller y are rejected as boundary points
  std::uint64_t seed = 0;
  int wanted = 0;         // stop after this many solutions (0: run all restarts)
};

struct SolverCampaign {
  std::vector<RelationInstance> solutions;
  int restarts_used = 0;
};

// Levenberg-Marquardt on x = p^2, y = q^2 from random starts.
SolverCampaign solve_hypotheses(double a, double b, int k, int m, int n, const SolverOptions& options);

struct EigenAudit {
  double max_defect = 0.0;        // max_I |r_I + rt_I - 2 beta|
  bool r_ascending = false;
  bool rt_descending = false;     // checked when r is ascending
};

EigenAudit eigenvalue_relation_audit(const std::vector<double>& r, const std::vector<double>& rt, int k, double beta,
                                     double tol = 1e-9);

struct AntipodalProductResult {
  double residual = 0.0;     // max_I |x_I + x_{I*} - 2 gamma|, I* = {M+1-i}
  bool hypothesis_holds = false;
  double spread = 0.0;       // max x - min x
  bool constant = false;     // spread below sqrt(tol) * max(1, max x)
  bool consistent = true;    // hypothesis implies constant
};

AntipodalProductResult antipodal_product_check(const std::vector<double>& x, double gamma, int k, double tol = 1e-9);

// The gamma minimizing the max residual for a given x: midpoint of the
// extreme half-sums.
double best_gamma(const std::vector<double>& x, int k);

struct AntipodalTrial {
  std::uint64_t seed = 0;
  double residual = 0.0;
  bool constant = false;
};

struct AntipodalCampaign {
  long trials = 0;
  long counterexamples = 0;        // non-constant with residual < tol
  double best_nonconstant = 0.0;   // smallest residual among non-constant trials
  std::uint64_t best_seed = 0;
  long constant_trials = 0;
  long constant_failures = 0;      // constant inputs whose residual is not exactly 0
  std::vector<AntipodalTrial> rows;  // filled when requested
};

// Each trial draws a sorted positive x from stream_seed(seed, trial); every
// 16th trial is constant. gamma = best_gamma(x, k).
AntipodalCampaign antipodal_campaign(int M, int k, long trials, std::uint64_t seed, double tol = 1e-9,
                                     unsigned threads = 1, bool keep_rows = false);

// x = (s-d, s, .., s, s+d), gamma = s^k: the configuration the proof is forced
// into. Returns the hypothesis residual, equal to 2 s^{k-2} d^2.
double contradiction_path_residual(int M, int k, double s, double d);

// Minimum hypothesis residual over sorted x with mean 1 and x_M - x_1 = spread,
// by Nelder-Mead from seeded starts.
double constrained_min_residual(int M, int k, double spread, std::uint64_t seed, int starts = 8);

}  // namespace cvxtomo
