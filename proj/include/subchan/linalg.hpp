#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace subchan {

using Complex = std::complex<double>;

// Amplitude of |k> at index k.
using FockVector = Eigen::VectorXcd;
// Row k, column s holds the coefficient of |k><s|.
using FockOperator = Eigen::MatrixXcd;

inline std::size_t dim_of(const FockOperator& x) { return static_cast<std::size_t>(x.rows()); }

// Largest singular value.
inline double operator_norm(const FockOperator& x) {
  if (x.size() == 0) return 0.0;
  if (x.rows() == 1 || x.cols() == 1) return x.norm();
  Eigen::BDCSVD<FockOperator> svd(x);
  return svd.singularValues()(0);
}

inline double hs_norm(const FockOperator& x) { return x.norm(); }

// Tr(a^* b)
inline Complex hs_inner(const FockOperator& a, const FockOperator& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

inline double hermiticity_defect(const FockOperator& x) {
  if (x.size() == 0) return 0.0;
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const FockOperator& x, double tol = 1e-12) {
  return x.rows() == x.cols() && hermiticity_defect(x) <= tol;
}

// Smallest eigenvalue of the hermitian part of x.
inline double min_eigenvalue(const FockOperator& x) {
  const FockOperator h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<FockOperator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Hermitian, positive semidefinite and unit trace.
inline bool is_state(const FockOperator& x, double structural_tol = 1e-12,
                     double spectral_tol = 1e-10) {
  if (!is_hermitian(x, structural_tol)) return false;
  if (std::abs(x.trace() - Complex(1.0)) > spectral_tol) return false;
  return min_eigenvalue(x) >= -spectral_tol;
}

inline bool is_normalized(const FockVector& v, double tol = 1e-12) {
  return std::abs(v.squaredNorm() - 1.0) <= tol;
}

inline FockOperator outer(const FockVector& ket, const FockVector& bra) {
  return ket * bra.adjoint();
}

// Column-stacking: vec(x)[s * N + k] = x(k, s). Eigen's default column-major
// storage already has this layout.
inline Eigen::VectorXcd vec(const FockOperator& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

inline FockOperator unvec(const Eigen::VectorXcd& v, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Eigen::Map<const FockOperator>(v.data(), n, n);
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace subchan
