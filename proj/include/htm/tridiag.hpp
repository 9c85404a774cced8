#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace htm {

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiag {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;

  Eigen::Index size() const { return diag.size(); }
};

inline Eigen::VectorXd matvec(const SymTridiag& A, const Eigen::VectorXd& x) {
  const Eigen::Index n = A.size();
  Eigen::VectorXd y = A.diag.cwiseProduct(x);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    y(i) += A.off(i) * x(i + 1);
    y(i + 1) += A.off(i) * x(i);
  }
  return y;
}

inline double bilinear(const SymTridiag& A, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = A.size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += A.diag(i) * x(i) * y(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) s += A.off(i) * (x(i) * y(i + 1) + x(i + 1) * y(i));
  return s;
}

inline double quad_form(const SymTridiag& A, const Eigen::VectorXd& x) {
  return bilinear(A, x, x);
}

/// LDL^T factorization without pivoting; min_pivot exposes definiteness
/// (Sylvester: the number of negative pivots equals the number of negative
/// eigenvalues).
struct TridiagFactor {
  Eigen::VectorXd d;
  Eigen::VectorXd l;
  double min_pivot = 0.0;

  bool positive_definite() const { return min_pivot > 0.0; }
};

inline TridiagFactor ldlt(const SymTridiag& A) {
  const Eigen::Index n = A.size();
  TridiagFactor F;
  F.d.resize(n);
  F.l.resize(n - 1);
  F.d(0) = A.diag(0);
  F.min_pivot = F.d(0);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (F.d(i) == 0.0) throw std::runtime_error("tridiagonal LDL^T hit a zero pivot");
    F.l(i) = A.off(i) / F.d(i);
    F.d(i + 1) = A.diag(i + 1) - A.off(i) * F.l(i);
    F.min_pivot = std::min(F.min_pivot, F.d(i + 1));
  }
  return F;
}

inline Eigen::VectorXd solve(const TridiagFactor& F, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = F.d.size();
  Eigen::VectorXd x = rhs;
  for (Eigen::Index i = 0; i + 1 < n; ++i) x(i + 1) -= F.l(i) * x(i);
  x.array() /= F.d.array();
  for (Eigen::Index i = n - 1; i > 0; --i) x(i - 1) -= F.l(i - 1) * x(i);
  return x;
}

inline Eigen::MatrixXd to_dense(const SymTridiag& A) {
  const Eigen::Index n = A.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) M(i, i) = A.diag(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    M(i, i + 1) = A.off(i);
    M(i + 1, i) = A.off(i);
  }
  return M;
}

}  // namespace htm
