#pragma once

// Exterior powers of R^m over the lexicographic basis of k-subsets: k-vectors,
// compound matrices, symmetric forms on k-vectors and the first Bianchi
// identity. Everything here is header-only and templated on the scalar type;
// the randomized checks (polarization, common eigenbasis) are double only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvxtomo/errors.hpp"
#include "cvxtomo/random.hpp"

namespace cvxtomo {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Strictly increasing index set I = {i_1 < ... < i_k} in {0, ..., m-1}.
struct MultiIndex {
  std::vector<int> entries;
  int m = 0;

  int grade() const { return static_cast<int>(entries.size()); }
  bool contains(int i) const { return std::binary_search(entries.begin(), entries.end(), i); }
  bool operator==(const MultiIndex&) const = default;

  // 1-based rendering, e.g. "{1,3}".
  std::string str() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < entries.size(); ++i) os << (i ? "," : "") << entries[i] + 1;
    os << '}';
    return os.str();
  }
};

inline void check_grade(int m, int k) {
  if (m < 1 || k < 1 || k > m)
    throw std::invalid_argument("grade k=" + std::to_string(k) + " out of range for m=" +
                                std::to_string(m));
}

// All C(m,k) index sets in lexicographic order.
inline std::vector<MultiIndex> multi_indices(int m, int k) {
  check_grade(m, k);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(binomial(m, k)));
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.push_back({c, m});
    int i = k - 1;
    while (i >= 0 && c[i] == m - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

// Position of I in multi_indices(m, k).
inline std::int64_t rank(const MultiIndex& index) {
  const int k = index.grade();
  const int m = index.m;
  std::int64_t r = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int j = prev + 1; j < index.entries[i]; ++j) r += binomial(m - 1 - j, k - 1 - i);
    prev = index.entries[i];
  }
  return r;
}

inline MultiIndex unrank(int m, int k, std::int64_t r) {
  check_grade(m, k);
  if (r < 0 || r >= binomial(m, k)) throw std::invalid_argument("rank out of range");
  MultiIndex out{{}, m};
  int next = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = next;; ++j) {
      const std::int64_t block = binomial(m - 1 - j, k - 1 - i);
      if (r < block) {
        out.entries.push_back(j);
        next = j + 1;
        break;
      }
      r -= block;
    }
  }
  return out;
}

// Element of the k-th exterior power in coordinates over {e_I}.
template <typename Scalar>
struct KVector {
  int m = 0;
  int k = 0;
  VectorX<Scalar> coords;

  static KVector zero(int m, int k) {
    return {m, k, VectorX<Scalar>::Zero(static_cast<Eigen::Index>(binomial(m, k)))};
  }
  static KVector basis(const MultiIndex& index) {
    KVector v = zero(index.m, index.grade());
    v.coords(static_cast<Eigen::Index>(rank(index))) = Scalar(1);
    return v;
  }

  Scalar dot(const KVector& other) const { return coords.dot(other.coords); }
  KVector operator+(const KVector& o) const { return {m, k, coords + o.coords}; }
  KVector operator-(const KVector& o) const { return {m, k, coords - o.coords}; }
  KVector operator*(Scalar s) const { return {m, k, coords * s}; }
};

// Matrix of the induced map on k-vectors: entry (I,J) is the minor det A[I,J].
template <typename Scalar>
struct CompoundMatrix {
  int m = 0;
  int k = 0;
  MatrixX<Scalar> entries;

  KVector<Scalar> apply(const KVector<Scalar>& xi) const { return {m, k, entries * xi.coords}; }
};

// Symmetric bilinear form on the k-th exterior power. The matrix is mirrored
// from its upper triangle on construction, so symmetry is exact.
template <typename Scalar>
class SymKForm {
public:
  SymKForm() = default;
  SymKForm(int m, int k, MatrixX<Scalar> matrix) : m_(m), k_(k), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(binomial(m, k));
    if (matrix_.rows() != n || matrix_.cols() != n)
      throw std::invalid_argument("form matrix must be C(m,k) x C(m,k)");
    matrix_.template triangularView<Eigen::StrictlyLower>() = matrix_.transpose();
  }

  static SymKForm zero(int m, int k) {
    const auto n = static_cast<Eigen::Index>(binomial(m, k));
    return SymKForm(m, k, MatrixX<Scalar>::Zero(n, n));
  }

  int m() const { return m_; }
  int k() const { return k_; }
  const MatrixX<Scalar>& matrix() const { return matrix_; }

  Scalar operator()(const KVector<Scalar>& xi, const KVector<Scalar>& zeta) const {
    return xi.coords.dot(matrix_ * zeta.coords);
  }

  SymKForm operator+(const SymKForm& o) const { return SymKForm(m_, k_, matrix_ + o.matrix_); }
  SymKForm operator-(const SymKForm& o) const { return SymKForm(m_, k_, matrix_ - o.matrix_); }
  SymKForm operator*(Scalar s) const { return SymKForm(m_, k_, matrix_ * s); }

private:
  int m_ = 0;
  int k_ = 0;
  MatrixX<Scalar> matrix_;
};

// det A[rows, cols] by LU with partial pivoting.
template <typename Derived>
typename Derived::Scalar minor_det(const Eigen::MatrixBase<Derived>& a, const MultiIndex& rows,
                                   const MultiIndex& cols) {
  using Scalar = typename Derived::Scalar;
  const int k = rows.grade();
  MatrixX<Scalar> sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = a(rows.entries[i], cols.entries[j]);
  return Eigen::PartialPivLU<MatrixX<Scalar>>(sub).determinant();
}

template <typename Derived>
CompoundMatrix<typename Derived::Scalar> wedge_power(const Eigen::MatrixBase<Derived>& a, int k) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw std::invalid_argument("wedge_power: matrix must be square");
  const int m = static_cast<int>(a.rows());
  const auto indices = multi_indices(m, k);
  const auto n = static_cast<Eigen::Index>(indices.size());
  MatrixX<Scalar> out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = minor_det(a, indices[i], indices[j]);
  return {m, k, std::move(out)};
}

// u_1 ^ ... ^ u_k for the columns of an m x k matrix.
template <typename Derived>
KVector<typename Derived::Scalar> decompose(const Eigen::MatrixBase<Derived>& frame) {
  using Scalar = typename Derived::Scalar;
  const int m = static_cast<int>(frame.rows());
  const int k = static_cast<int>(frame.cols());
  const auto indices = multi_indices(m, k);
  MultiIndex all_cols{std::vector<int>(k), k};
  std::iota(all_cols.entries.begin(), all_cols.entries.end(), 0);
  KVector<Scalar> out = KVector<Scalar>::zero(m, k);
  for (std::size_t r = 0; r < indices.size(); ++r)
    out.coords(static_cast<Eigen::Index>(r)) = minor_det(frame, indices[r], all_cols);
  return out;
}

// <u_1 ^ ... ^ u_k, v_1 ^ ... ^ v_k> = det(<u_i, v_j>), columns as vectors.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar gram_inner(const Eigen::MatrixBase<DerivedU>& u,
                                     const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.cols() != v.cols() || u.rows() != v.rows())
    throw std::invalid_argument("gram_inner: frames must have equal shape");
  const MatrixX<Scalar> g = u.transpose() * v;
  return Eigen::PartialPivLU<MatrixX<Scalar>>(g).determinant();
}

// omega_A(xi, zeta) = <(^k A) xi, zeta>, symmetrized.
template <typename Scalar>
SymKForm<Scalar> form_of(const CompoundMatrix<Scalar>& c) {
  return SymKForm<Scalar>(c.m, c.k, (c.entries + c.entries.transpose()) / Scalar(2));
}

// sum_{j=1}^{k+1} (-1)^j omega(u_1^..^u_j omitted..^u_{k+1}, u_j ^ v_1 ^ .. ^ v_{k-1}).
// `u` is m x (k+1), `v` is m x (k-1).
template <typename Scalar, typename DerivedU, typename DerivedV>
Scalar bianchi_defect(const SymKForm<Scalar>& omega, const Eigen::MatrixBase<DerivedU>& u,
                      const Eigen::MatrixBase<DerivedV>& v) {
  const int k = omega.k();
  const int m = omega.m();
  if (k < 2) throw std::invalid_argument("bianchi_defect: needs k >= 2");
  if (u.rows() != m || u.cols() != k + 1 || v.rows() != m || v.cols() != k - 1)
    throw std::invalid_argument("bianchi_defect: expected k+1 vectors u and k-1 vectors v in R^m");
  Scalar sum(0);
  for (int j = 0; j < k + 1; ++j) {
    MatrixX<Scalar> omitted(m, k);
    for (int c = 0, col = 0; c < k + 1; ++c)
      if (c != j) omitted.col(col++) = u.col(c);
    MatrixX<Scalar> lead(m, k);
    lead.col(0) = u.col(j);
    if (k > 1) lead.rightCols(k - 1) = v;
    // 1-based sign (-1)^(j+1)
    const Scalar sign = (j % 2 == 0) ? Scalar(-1) : Scalar(1);
    sum += sign * omega(decompose(omitted), decompose(lead));
  }
  return sum;
}

// Coefficient of e_1 ^ ... ^ e_{2k} in xi ^ zeta, as a form on the k-th
// exterior power of R^{2k} (k even so the form is symmetric).
template <typename Scalar = double>
SymKForm<Scalar> square_form_matrix(int k) {
  if (k < 1 || k % 2 != 0) throw std::invalid_argument("square_form: grade k must be even");
  const int m = 2 * k;
  const auto indices = multi_indices(m, k);
  const auto n = static_cast<Eigen::Index>(indices.size());
  MatrixX<Scalar> q = MatrixX<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      std::vector<int> perm = indices[i].entries;
      perm.insert(perm.end(), indices[j].entries.begin(), indices[j].entries.end());
      std::vector<int> sorted = perm;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      int inversions = 0;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) inversions += perm[a] > perm[b];
      q(i, j) = (inversions % 2 == 0) ? Scalar(1) : Scalar(-1);
    }
  }
  return SymKForm<Scalar>(m, k, q);
}

template <typename Scalar>
Scalar square_form(const KVector<Scalar>& xi) {
  if (xi.k % 2 != 0) throw std::invalid_argument("square_form: grade k must be even");
  if (xi.m != 2 * xi.k) throw std::invalid_argument("square_form: ambient dimension must be 2k");
  const auto q = square_form_matrix<Scalar>(xi.k);
  return q(xi, xi);
}

namespace detail {

// Every (u, v) tuple of basis vectors with u strictly increasing (k+1 of them)
// and v strictly increasing (k-1 of them). The Bianchi sum is alternating in
// each group, so these tuples determine it by multilinearity.
inline std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> bianchi_basis_tuples(int m, int k) {
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> out;
  if (k + 1 > m) return out;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
  for (const auto& us : multi_indices(m, k + 1)) {
    for (const auto& vs : multi_indices(m, k - 1)) {
      Eigen::MatrixXd u(m, k + 1), v(m, k - 1);
      for (int i = 0; i < k + 1; ++i) u.col(i) = id.col(us.entries[i]);
      for (int i = 0; i < k - 1; ++i) v.col(i) = id.col(vs.entries[i]);
      out.emplace_back(std::move(u), std::move(v));
    }
  }
  return out;
}

inline Eigen::MatrixXd orthonormal_frame(Eigen::Index m, Eigen::Index k, Rng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(m, k, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
}

// Basis (as columns of packed upper-triangle coordinates) of the symmetric
// forms satisfying the Bianchi identity.
inline Eigen::MatrixXd bianchi_subspace(int m, int k) {
  const auto n = static_cast<Eigen::Index>(binomial(m, k));
  const Eigen::Index p = n * (n + 1) / 2;
  const auto tuples = bianchi_basis_tuples(m, k);
  Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(tuples.size(), p), p);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& [u, v] = tuples[t];
    for (int j = 0; j < k + 1; ++j) {
      Eigen::MatrixXd omitted(m, k), lead(m, k);
      for (int c = 0, col = 0; c < k + 1; ++c)
        if (c != j) omitted.col(col++) = u.col(c);
      lead.col(0) = u.col(j);
      lead.rightCols(k - 1) = v;
      const Eigen::VectorXd xi = decompose(omitted).coords;
      const Eigen::VectorXd zeta = decompose(lead).coords;
      const double sign = (j % 2 == 0) ? -1.0 : 1.0;
      Eigen::Index col = 0;
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a; b < n; ++b, ++col)
          constraints(static_cast<Eigen::Index>(t), col) +=
              sign * (a == b ? xi(a) * zeta(a) : xi(a) * zeta(b) + xi(b) * zeta(a));
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(p - rank);
}

inline double max_abs_bianchi(const SymKForm<double>& omega, int trials, Rng& rng) {
  const int m = omega.m();
  const int k = omega.k();
  double worst = 0.0;
  for (const auto& [u, v] : bianchi_basis_tuples(m, k))
    worst = std::max(worst, std::abs(bianchi_defect(omega, u, v)));
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd u = gaussian_matrix(m, k + 1, rng);
    Eigen::MatrixXd v = gaussian_matrix(m, k - 1, rng);
    u.colwise().normalize();
    v.colwise().normalize();
    worst = std::max(worst, std::abs(bianchi_defect(omega, u, v)));
  }
  return worst;
}

}  // namespace detail

struct PolarizationResult {
  bool concluded = false;        // both forms passed the Bianchi precondition
  std::string refused;           // which form(s) failed it: "A", "B" or "A,B"
  double bianchi_defect_a = 0.0;
  double bianchi_defect_b = 0.0;
  double decomposable_gap = 0.0; // max |A(xi,xi) - B(xi,xi)| over sampled decomposables
  bool agree_on_decomposables = false;
  double reconstructed_difference = 0.0;  // max entry of A - B rebuilt from decomposable values
  double entry_difference = 0.0;          // max |A - B| read off the matrices directly
  bool equal = false;
};

// Decides A == B from the values A(xi,xi), B(xi,xi) on decomposable xi only.
// Valid for forms satisfying the first Bianchi identity; forms that fail it
// are refused rather than judged. Samples are the basis k-vectors e_I plus
// `trials` random orthonormal k-frames (at least twice the dimension of the
// Bianchi subspace, so the reconstruction is overdetermined).
inline PolarizationResult polarization_check(const SymKForm<double>& a, const SymKForm<double>& b,
                                             int trials, double tol, std::uint64_t seed = 0) {
  if (a.m() != b.m() || a.k() != b.k())
    throw std::invalid_argument("polarization_check: forms live on different spaces");
  const int m = a.m();
  const int k = a.k();
  Rng rng(seed);
  PolarizationResult out;
  out.entry_difference = (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();

  const double scale_a = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
  const double scale_b = std::max(1.0, b.matrix().cwiseAbs().maxCoeff());
  if (k >= 2 && k < m) {
    out.bianchi_defect_a = detail::max_abs_bianchi(a, trials, rng);
    out.bianchi_defect_b = detail::max_abs_bianchi(b, trials, rng);
    const bool a_ok = out.bianchi_defect_a <= tol * scale_a;
    const bool b_ok = out.bianchi_defect_b <= tol * scale_b;
    if (!a_ok || !b_ok) {
      out.refused = !a_ok && !b_ok ? "A,B" : (!a_ok ? "A" : "B");
      return out;
    }
  }
  out.concluded = true;

  // k = 1 and k = m: every vector is decomposable and every form is Bianchi.
  const auto n = static_cast<Eigen::Index>(binomial(m, k));
  const Eigen::MatrixXd basis = (k >= 2 && k < m)
                                    ? detail::bianchi_subspace(m, k)
                                    : Eigen::MatrixXd::Identity(n * (n + 1) / 2, n * (n + 1) / 2);
  const Eigen::MatrixXd diff = a.matrix() - b.matrix();

  std::vector<Eigen::VectorXd> samples;
  for (const auto& index : multi_indices(m, k)) samples.push_back(KVector<double>::basis(index).coords);
  const int extra = std::max<int>(trials, static_cast<int>(2 * basis.cols()));
  for (int t = 0; t < extra; ++t) samples.push_back(decompose(detail::orthonormal_frame(m, k, rng)).coords);

  Eigen::MatrixXd design(samples.size(), n * (n + 1) / 2);
  Eigen::VectorXd gaps(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Eigen::VectorXd& xi = samples[s];
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j, ++col)
        design(static_cast<Eigen::Index>(s), col) = (i == j ? 1.0 : 2.0) * xi(i) * xi(j);
    gaps(static_cast<Eigen::Index>(s)) = xi.dot(diff * xi);
  }
  out.decomposable_gap = gaps.cwiseAbs().maxCoeff();
  out.agree_on_decomposables = out.decomposable_gap <= tol * std::max(scale_a, scale_b);

  const Eigen::VectorXd coeffs = (design * basis).colPivHouseholderQr().solve(gaps);
  const Eigen::VectorXd packed = basis * coeffs;
  double worst = 0.0;
  for (Eigen::Index i = 0, col = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j, ++col) worst = std::max(worst, std::abs(packed(col)));
  out.reconstructed_difference = worst;
  out.equal = out.agree_on_decomposables && worst <= std::sqrt(tol) * std::max(scale_a, scale_b);
  return out;
}

struct CommonEigenbasis {
  Eigen::MatrixXd basis;       // orthonormal columns
  Eigen::VectorXd g_values;    // G basis_i = g_i basis_i
  Eigen::VectorXd h_values;
  double hypothesis_defect = 0.0;    // ||^k G + ^k H - beta ^k id||_2
  double diagonalization_residual = 0.0;
  double sigma_min_g = 0.0;
  double sigma_min_h = 0.0;
  double nonsingular_bound = 0.0;    // lower bound one of the sigma_min must exceed (k >= 2)
  char nonsingular = ' ';            // 'G' or 'H' when k >= 2
};

// Common orthonormal eigenbasis of selfadjoint G, H under
// ^k G + ^k H = beta ^k id. Eigenvalues of G closer than `cluster_tol`
// (relative) are treated as one eigenspace, inside which H is diagonalized.
inline CommonEigenbasis common_eigenbasis(const Eigen::MatrixXd& g, const Eigen::MatrixXd& h, int k,
                                          double beta, double tol = 1e-10,
                                          double cluster_tol = 1e-7) {
  const int m = static_cast<int>(g.rows());
  if (g.cols() != m || h.rows() != m || h.cols() != m)
    throw std::invalid_argument("common_eigenbasis: G and H must be square of equal size");
  if (k < 1 || k > m - 1) throw std::invalid_argument("common_eigenbasis: need 1 <= k <= m-1");
  if (beta == 0.0) throw std::invalid_argument("common_eigenbasis: beta must be nonzero");

  CommonEigenbasis out;
  const auto n = static_cast<Eigen::Index>(binomial(m, k));
  const Eigen::MatrixXd lhs = wedge_power(g, k).entries + wedge_power(h, k).entries -
                              beta * Eigen::MatrixXd::Identity(n, n);
  out.hypothesis_defect = lhs.jacobiSvd().singularValues()(0);
  if (out.hypothesis_defect >= tol)
    throw PreconditionError("common_eigenbasis: ^kG + ^kH != beta ^k id (defect " +
                                std::to_string(out.hypothesis_defect) + ")",
                            out.hypothesis_defect);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(h);
  out.sigma_min_g = eg.eigenvalues().cwiseAbs().minCoeff();
  out.sigma_min_h = eh.eigenvalues().cwiseAbs().minCoeff();
  if (k >= 2) {
    // For unit kernel-ish vectors v1 of G and v2 of H there is a unit
    // decomposable xi with ||(^kG + ^kH) xi|| <= s_G |G|^{k-1} + s_H |H|^{k-1},
    // while the hypothesis forces it to be at least |beta| - defect.
    const double gn = std::pow(std::max(g.norm(), 1e-300), k - 1);
    const double hn = std::pow(std::max(h.norm(), 1e-300), k - 1);
    const double need = (std::abs(beta) - out.hypothesis_defect) / 2.0;
    const double wg = out.sigma_min_g * gn;
    const double wh = out.sigma_min_h * hn;
    out.nonsingular = wg >= wh ? 'G' : 'H';
    out.nonsingular_bound = need / (out.nonsingular == 'G' ? gn : hn);
    if (std::max(wg, wh) < need * (1.0 - 1e-9))
      throw InconsistencyError("common_eigenbasis: both G and H are numerically singular");
  }

  const Eigen::VectorXd& lam = eg.eigenvalues();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Eigen::MatrixXd basis = eg.eigenvectors();
  for (Eigen::Index start = 0; start < m;) {
    Eigen::Index end = start + 1;
    while (end < m && lam(end) - lam(end - 1) <= cluster_tol * scale) ++end;
    if (end - start > 1) {
      const Eigen::MatrixXd block = basis.middleCols(start, end - start);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner(block.transpose() * h * block);
      basis.middleCols(start, end - start) = block * inner.eigenvectors();
    }
    start = end;
  }
  const Eigen::MatrixXd dg = basis.transpose() * g * basis;
  const Eigen::MatrixXd dh = basis.transpose() * h * basis;
  out.basis = basis;
  out.g_values = dg.diagonal();
  out.h_values = dh.diagonal();
  Eigen::MatrixXd off_g = dg, off_h = dh;
  off_g.diagonal().setZero();
  off_h.diagonal().setZero();
  out.diagonalization_residual = std::max(off_g.cwiseAbs().maxCoeff(), off_h.cwiseAbs().maxCoeff());
  return out;
}

}  // namespace cvxtomo
