#pragma once

// Independent reference computations used as test oracles.

#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Determinant by cofactor expansion along the first row.
inline double cofactor_det(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd sub(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) sub(r - 1, cc++) = a(r, c);
    sum += ((j % 2) ? -1.0 : 1.0) * a(0, j) * cofactor_det(sub);
  }
  return sum;
}

inline double minor(const Eigen::MatrixXd& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = a(rows[i], cols[j]);
  return cofactor_det(sub);
}

// k-subsets of {0..m-1} in lexicographic order, by recursion.
inline void subsets(int m, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < m; ++i) {
    cur.push_back(i);
    subsets(m, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> subsets(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  subsets(m, k, 0, cur, out);
  return out;
}

// Plucker coordinates of the columns of f by cofactor minors.
inline Eigen::VectorXd plucker(const Eigen::MatrixXd& f) {
  const int m = static_cast<int>(f.rows()), k = static_cast<int>(f.cols());
  std::vector<int> all(k);
  for (int i = 0; i < k; ++i) all[i] = i;
  const auto idx = subsets(m, k);
  Eigen::VectorXd out(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) out(r) = minor(f, idx[r], all);
  return out;
}

}  // namespace oracle
