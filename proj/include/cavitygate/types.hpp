#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace cavitygate {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMatrix2 = Eigen::Matrix<Complex<Real>, 2, 2>;

using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;
using CMatrix2d = CMatrix2<double>;

inline constexpr double kPi = std::numbers::pi;

// Largest |a_ij - b_ij|. Used as the house distance between matrices.
template <typename DerivedA, typename DerivedB>
auto max_entry_deviation(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// max |U^dagger U - I|
template <typename Derived>
auto unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Dense product = u.adjoint() * u;
  return max_entry_deviation(product, Dense::Identity(u.cols(), u.cols()));
}

}  // namespace cavitygate
