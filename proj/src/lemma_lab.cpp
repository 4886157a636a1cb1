#include "cvxtomo/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "cvxtomo/errors.hpp"
#include "cvxtomo/multilinear.hpp"
#include "cvxtomo/optimize.hpp"
#include "cvxtomo/parallel.hpp"
#include "cvxtomo/random.hpp"

namespace cvxtomo {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RPoly = Polynomial<Rational>;

double product(const std::vector<double>& v, const MultiIndex& index) {
  double p = 1.0;
  for (int i : index.entries) p *= v[static_cast<std::size_t>(i)];
  return p;
}

void check_instance(const RelationInstance& inst) {
  const int n = inst.size();
  if (static_cast<int>(inst.y.size()) != n) throw std::invalid_argument("relation instance: x and y differ in length");
  if (!(1 <= inst.k && inst.k < inst.m && inst.m <= n))
    throw std::invalid_argument("relation instance: needs 1 <= k < m <= N");
  if (n > 12) throw std::invalid_argument("relation instance: exhaustive subsets need N <= 12");
}

RPoly rpoly(std::initializer_list<Rational> c) { return RPoly(std::vector<Rational>(c)); }

Rational pow_r(const Rational& r, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= r;
  return out;
}

RPoly split_polynomial_r(double a, double b, int n, int l) {
  const Rational two_a = 2 * Rational(a), two_b = 2 * Rational(b);
  const auto ul = static_cast<std::size_t>(l - 1);
  const auto nl = static_cast<std::size_t>(n - l);
  const RPoly lhs = RPoly::monomial(pow_r(two_a, n - 1), ul * nl) + RPoly::monomial(pow_r(two_a, n - 1), ul * (nl - 1));
  const RPoly f1 = (RPoly::constant(1) + RPoly::monomial(1, nl - 1)).pow(static_cast<unsigned>(l - 1));
  const RPoly f2 = (RPoly::constant(1) + RPoly::monomial(1, ul)).pow(static_cast<unsigned>(n - l));
  return lhs - two_b * (f1 * f2);
}

void check_split(int n, int l) {
  if (!(2 <= l && l <= n - 2)) throw std::invalid_argument("split_polynomial: needs 2 <= l <= n-2");
}

// Positive real roots in (lo, hi).
std::vector<double> roots_in(const Polynomial<double>& p, double lo, double hi) {
  std::vector<double> out;
  if (p.is_zero()) throw InconsistencyError("branch polynomial vanished identically");
  for (double r : real_roots(p))
    if (r > lo && r < hi) out.push_back(r);
  return out;
}

void add(CandidateSet& set, double y, double x, const std::string& branch) {
  if (!(y > 0.0) || !std::isfinite(y)) return;
  set.members.push_back({y, x, branch});
}

}  // namespace

HypothesisResidual hypothesis_residual(const RelationInstance& inst) {
  check_instance(inst);
  const int n = inst.size();
  HypothesisResidual out;
  for (const auto& index : multi_indices(n, inst.k))
    out.k_residual = std::max(out.k_residual, std::abs(product(inst.x, index) + product(inst.y, index) - 2.0 * inst.a));
  for (const auto& index : multi_indices(n, inst.m))
    out.m_residual = std::max(out.m_residual, std::abs(product(inst.x, index) + product(inst.y, index) - 2.0 * inst.b));
  return out;
}

void require_exponent_gap(double a, double b, int k, int m, double tol) {
  const double am = std::pow(a, m), bk = std::pow(b, k);
  const double gap = std::abs(am - bk);
  if (gap <= tol * std::max({1.0, am, bk})) {
    std::ostringstream os;
    os << "a^m = b^k (|a^m - b^k| = " << gap << "): the relation lemmas exclude this case";
    throw PreconditionError(os.str(), gap);
  }
}

bool ratio_conclusion_check(const RelationInstance& inst, double tol) {
  if (inst.k < 2) throw PreconditionError("ratio conclusion needs k >= 2", inst.k);
  const HypothesisResidual res = hypothesis_residual(inst);
  if (res.max() >= tol) throw PreconditionError("hypothesis residual exceeds tolerance", res.max());
  require_exponent_gap(inst.a, inst.b, inst.k, inst.m, tol);
  std::vector<double> ratio;
  for (int i = 0; i < inst.size(); ++i) {
    if (!(inst.x[i] > 0.0)) throw PreconditionError("ratio conclusion needs every x positive", inst.x[i]);
    ratio.push_back(inst.x[i] / inst.y[i]);
  }
  std::vector<double> sorted = ratio;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double c = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  double dev = 0.0;
  for (double r : ratio) dev = std::max(dev, std::abs(r - c));
  return dev < std::sqrt(tol) * std::max(1.0, c);
}

RelationInstance infinite_family(double t, int n, int k, int m) {
  if (!(t > 0.0 && t < 2.0)) throw std::invalid_argument("infinite_family: needs 0 < t < 2");
  if (n < 2) throw std::invalid_argument("infinite_family: needs N >= 2");
  if (m < 0) m = n - 1;
  RelationInstance inst;
  inst.x.assign(static_cast<std::size_t>(n), 1.0);
  inst.y.assign(static_cast<std::size_t>(n), 1.0);
  inst.x.back() = t;
  inst.y.back() = 2.0 - t;
  inst.k = k;
  inst.m = m;
  check_instance(inst);
  return inst;
}

double CandidateSet::distance(double v) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : members) best = std::min(best, std::abs(c.y - v));
  return best;
}

Polynomial<double> split_polynomial(double a, double b, int n, int l) {
  check_split(n, l);
  return convert<double>(split_polynomial_r(a, b, n, l));
}

int split_polynomial_exact_degree(double a, double b, int n, int l) {
  check_split(n, l);
  return split_polynomial_r(a, b, n, l).degree();
}

Polynomial<double> constant_polynomial(double a, double b, int n) {
  const Rational two_a = 2 * Rational(a);
  const auto e = static_cast<unsigned>(n - 1);
  const RPoly x = rpoly({0, 1});
  const RPoly p = x.pow(e) + rpoly({two_a, -1}).pow(e) - RPoly::constant(2 * Rational(b));
  return convert<double>(p);
}

Polynomial<double> power_polynomial(double a, double b, int k, int n) {
  const auto uk = static_cast<std::size_t>(k), un = static_cast<std::size_t>(n - 1);
  const RPoly lhs = (RPoly::constant(2 * Rational(a)) - RPoly::monomial(1, uk)).pow(static_cast<unsigned>(n - 1));
  const RPoly rhs = (RPoly::constant(2 * Rational(b)) - RPoly::monomial(1, un)).pow(static_cast<unsigned>(k));
  return convert<double>(lhs - rhs);
}

CandidateSet enumerate_candidates(double a, double b, int k, int m, int n, double gap_tol) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("enumerate_candidates: needs a, b > 0");
  if (!(1 <= k && k < m && m <= n - 1)) throw std::invalid_argument("enumerate_candidates: needs 1 <= k < m <= N-1");
  if (m != n - 1)
    throw std::invalid_argument("enumerate_candidates: only the reduced case m = N-1 is enumerated");
  require_exponent_gap(a, b, k, m, gap_tol);

  CandidateSet set{a, b, k, m, n, {}};
  const double two_a = 2.0 * a;

  // Some x_i = 0: y_i = 2a / y^{k-1} and the rest equal y.
  const double y0 = std::pow(b / a, 1.0 / (n - 1 - k));
  add(set, y0, k == 1 ? two_a - y0 : std::numeric_limits<double>::quiet_NaN(), "zero");
  add(set, two_a / std::pow(y0, k - 1), 0.0, "zero");

  if (k == 1) {
    // All x equal.
    for (double x : roots_in(constant_polynomial(a, b, n), 0.0, two_a)) add(set, two_a - x, x, "constant");
    // Two values z1 (l times) and z2. l = 1 and l = n-1 are mirror images.
    for (double z2 : roots_in(constant_polynomial(a, b, n), 0.0, two_a)) {
      const double den = std::pow(z2, n - 2) - std::pow(two_a - z2, n - 2);
      if (std::abs(den) < 1e-12 * std::max(1.0, std::pow(two_a, n - 2))) continue;
      const double z1 = (2.0 * b - two_a * std::pow(two_a - z2, n - 2)) / den;
      if (!(z1 > 0.0 && z1 < two_a)) continue;
      add(set, two_a - z1, z1, "split l=1");
      add(set, two_a - z2, z2, "split l=1");
    }
    for (int l = 2; l <= n - 2; ++l) {
      for (double t : roots_in(split_polynomial(a, b, n, l), 0.0, std::numeric_limits<double>::infinity())) {
        const double z1 = two_a / (1.0 + std::pow(t, n - l - 1));
        const double z2 = two_a * std::pow(t, l - 1) / (1.0 + std::pow(t, l - 1));
        const std::string tag = "split l=" + std::to_string(l);
        add(set, two_a - z1, z1, tag);
        add(set, two_a - z2, z2, tag);
      }
    }
  } else {
    // All x and y equal: x^k + y^k = 2a, x^{n-1} + y^{n-1} = 2b.
    for (double x : roots_in(power_polynomial(a, b, k, n), 0.0, std::pow(two_a, 1.0 / k))) {
      if (!(2.0 * b - std::pow(x, n - 1) > 0.0)) continue;
      add(set, std::pow(two_a - std::pow(x, k), 1.0 / k), x, "equal");
    }
  }
  return set;
}

SolverCampaign solve_hypotheses(double a, double b, int k, int m, int n, const SolverOptions& options) {
  if (!(1 <= k && k < m && m <= n)) throw std::invalid_argument("solve_hypotheses: needs 1 <= k < m <= N");
  const auto ik = multi_indices(n, k);
  const auto im = multi_indices(n, m);
  const Eigen::Index rows = static_cast<Eigen::Index>(ik.size() + im.size());
  const Eigen::Index cols = 2 * n;

  auto evaluate = [&](const Eigen::VectorXd& z, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = z(i) * z(i), y[i] = z(n + i) * z(n + i);
    r.resize(rows);
    if (jac) jac->setZero(rows, cols);
    Eigen::Index row = 0;
    auto fill = [&](const std::vector<MultiIndex>& indices, double target) {
      for (const auto& index : indices) {
        r(row) = product(x, index) + product(y, index) - target;
        if (jac) {
          for (int i : index.entries) {
            double px = 2.0 * z(i), py = 2.0 * z(n + i);
            for (int j : index.entries)
              if (j != i) px *= x[j], py *= y[j];
            (*jac)(row, i) = px;
            (*jac)(row, n + i) = py;
          }
        }
        ++row;
      }
    };
    fill(ik, 2.0 * a);
    fill(im, 2.0 * b);
  };

  SolverCampaign out;
  Rng rng(options.seed);
  const double scale = std::sqrt(std::pow(2.0 * std::max(a, b), 1.0 / k));
  std::uniform_real_distribution<double> start(0.05, 1.0);
  for (int s = 0; s < options.restarts; ++s) {
    if (options.wanted > 0 && static_cast<int>(out.solutions.size()) >= options.wanted) break;
    ++out.restarts_used;
    Eigen::VectorXd z(cols);
    for (Eigen::Index i = 0; i < cols; ++i) z(i) = scale * start(rng);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    evaluate(z, r, &jac);
    double cost = r.squaredNorm(), mu = 1e-3;
    for (int it = 0; it < options.max_iterations && r.cwiseAbs().maxCoeff() > 1e-15; ++it) {
      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd g = jac.transpose() * r;
      bool improved = false;
      for (int tries = 0; tries < 12 && !improved; ++tries) {
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
        const Eigen::VectorXd step = damped.ldlt().solve(-g);
        Eigen::VectorXd trial_r;
        const Eigen::VectorXd trial = z + step;
        evaluate(trial, trial_r, nullptr);
        if (trial_r.squaredNorm() < cost) {
          z = trial;
          cost = trial_r.squaredNorm();
          mu = std::max(mu / 3.0, 1e-12);
          improved = true;
        } else {
          mu *= 4.0;
        }
      }
      if (!improved) break;
      evaluate(z, r, &jac);
    }
    if (!(r.cwiseAbs().maxCoeff() < options.accept)) continue;
    RelationInstance inst;
    inst.a = a, inst.b = b, inst.k = k, inst.m = m;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      inst.x.push_back(z(i) * z(i));
      inst.y.push_back(z(n + i) * z(n + i));
      ok = ok && inst.y.back() >= options.min_y;
    }
    if (ok) out.solutions.push_back(std::move(inst));
  }
  return out;
}

EigenAudit eigenvalue_relation_audit(const std::vector<double>& r, const std::vector<double>& rt, int k, double beta,
                                     double tol) {
  if (r.size() != rt.size()) throw std::invalid_argument("eigenvalue_relation_audit: lengths differ");
  const int n = static_cast<int>(r.size());
  EigenAudit out;
  for (const auto& index : multi_indices(n, k))
    out.max_defect = std::max(out.max_defect, std::abs(product(r, index) + product(rt, index) - 2.0 * beta));
  out.r_ascending = std::is_sorted(r.begin(), r.end());
  out.rt_descending = true;
  for (int i = 0; i + 1 < n; ++i)
    if (rt[i] < rt[i + 1] - tol * std::max(1.0, std::abs(rt[i]))) out.rt_descending = false;
  return out;
}

namespace {

void check_antipodal(int M, int k) {
  if (M < 4) throw std::invalid_argument("antipodal product: needs M >= 4");
  if (!(2 <= k && k <= M - 2)) throw std::invalid_argument("antipodal product: needs 2 <= k <= M-2");
}

// Extreme values of x_I + x_{I*} over all k-subsets.
std::pair<double, double> antipodal_sums(const std::vector<double>& x, int k) {
  const int M = static_cast<int>(x.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& index : multi_indices(M, k)) {
    double p = 1.0, q = 1.0;
    for (int i : index.entries) {
      p *= x[static_cast<std::size_t>(i)];
      q *= x[static_cast<std::size_t>(M - 1 - i)];
    }
    lo = std::min(lo, p + q);
    hi = std::max(hi, p + q);
  }
  return {lo, hi};
}

double spread_of(const std::vector<double>& x) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return *mx - *mn;
}

}  // namespace

AntipodalProductResult antipodal_product_check(const std::vector<double>& x, double gamma, int k, double tol) {
  const int M = static_cast<int>(x.size());
  check_antipodal(M, k);
  for (double v : x)
    if (!(v > 0.0)) throw std::invalid_argument("antipodal product: x must be positive");
  if (!std::is_sorted(x.begin(), x.end())) throw std::invalid_argument("antipodal product: x must be ascending");
  const auto [lo, hi] = antipodal_sums(x, k);
  AntipodalProductResult out;
  out.residual = std::max(std::abs(lo - 2.0 * gamma), std::abs(hi - 2.0 * gamma));
  out.hypothesis_holds = out.residual < tol;
  out.spread = spread_of(x);
  out.constant = out.spread < std::sqrt(tol) * std::max(1.0, x.back());
  out.consistent = !out.hypothesis_holds || out.constant;
  return out;
}

double best_gamma(const std::vector<double>& x, int k) {
  const auto [lo, hi] = antipodal_sums(x, k);
  return (lo + hi) / 4.0;
}

AntipodalCampaign antipodal_campaign(int M, int k, long trials, std::uint64_t seed, double tol, unsigned threads,
                                     bool keep_rows) {
  check_antipodal(M, k);
  if (trials < 1) throw std::invalid_argument("antipodal_campaign: needs trials >= 1");
  std::vector<AntipodalTrial> rows(static_cast<std::size_t>(trials));
  parallel_for(rows.size(), threads, [&](std::size_t t) {
    const std::uint64_t s = stream_seed(seed, t);
    Rng rng(s);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    std::vector<double> x(static_cast<std::size_t>(M));
    if (t % 16 == 0) {
      std::fill(x.begin(), x.end(), u(rng));
    } else {
      for (auto& v : x) v = u(rng);
      std::sort(x.begin(), x.end());
    }
    double gamma = 1.0;
    if (t % 16 == 0)
      for (int i = 0; i < k; ++i) gamma *= x[0];
    else
      gamma = best_gamma(x, k);
    const auto r = antipodal_product_check(x, gamma, k, tol);
    rows[t] = {s, r.residual, spread_of(x) == 0.0};
  });

  AntipodalCampaign out;
  out.trials = trials;
  out.best_nonconstant = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    if (row.constant) {
      ++out.constant_trials;
      if (row.residual != 0.0) ++out.constant_failures;
      continue;
    }
    if (row.residual < tol) ++out.counterexamples;
    if (row.residual < out.best_nonconstant) {
      out.best_nonconstant = row.residual;
      out.best_seed = row.seed;
    }
  }
  if (keep_rows) out.rows = std::move(rows);
  return out;
}

double contradiction_path_residual(int M, int k, double s, double d) {
  check_antipodal(M, k);
  if (!(s > std::abs(d))) throw std::invalid_argument("contradiction path: needs s > |d|");
  std::vector<double> x(static_cast<std::size_t>(M), s);
  x.front() = s - std::abs(d);
  x.back() = s + std::abs(d);
  const auto [lo, hi] = antipodal_sums(x, k);
  const double g2 = 2.0 * std::pow(s, k);
  return std::max(std::abs(lo - g2), std::abs(hi - g2));
}

double constrained_min_residual(int M, int k, double spread, std::uint64_t seed, int starts) {
  check_antipodal(M, k);
  if (!(spread > 0.0 && spread < 2.0)) throw std::invalid_argument("constrained_min_residual: needs 0 < spread < 2");
  // Parameters: M-2 interior points as fractions of [x_1, x_M] plus the
  // offset of x_1; the mean is normalized to 1 afterwards.
  auto build = [&](const Eigen::VectorXd& z) {
    std::vector<double> x(static_cast<std::size_t>(M));
    x.front() = 0.0;
    x.back() = 1.0;
    for (int i = 1; i + 1 < M; ++i) x[i] = 0.5 + 0.5 * std::tanh(z(i - 1));
    std::sort(x.begin(), x.end());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= M;
    // Affine map with x_M - x_1 = spread and mean 1.
    for (auto& v : x) v = 1.0 + spread * (v - mean);
    return x;
  };
  auto objective = [&](const Eigen::VectorXd& z) {
    const auto x = build(z);
    if (x.front() <= 0.0) return std::numeric_limits<double>::infinity();
    const auto [lo, hi] = antipodal_sums(x, k);
    return (hi - lo) / 2.0;
  };
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd z(M - 2);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    best = std::min(best, nelder_mead(objective, z, 0.5, 4000, 1e-12).value);
  }
  return best;
}

}  // namespace cvxtomo
