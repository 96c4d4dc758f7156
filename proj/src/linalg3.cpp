#include "cqkd/linalg3.hpp"

#include <algorithm>

namespace cqkd {

namespace {

double max_abs_asymmetry(const Mat3c& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

EigResult eig_hermitian(const Mat3c& H, const Tolerances& tol) {
  if (max_abs_asymmetry(H) > tol.hermiticity) {
    throw ValidationError("eig_hermitian: input is not Hermitian within tolerance");
  }
  const Mat3c sym = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat3c> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eig_hermitian: eigensolver failed to converge");
  }
  // Eigen returns ascending order; the contract is descending.
  EigResult out;
  for (int i = 0; i < 3; ++i) {
    out.values[i] = solver.eigenvalues()(2 - i);
    out.vectors[i] = solver.eigenvectors().col(2 - i);
  }
  return out;
}

Mat9c kron(const Mat3c& a, const Mat3c& b) {
  Mat9c out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

Mat3c partial_trace_second(const Mat9c& w) {
  Mat3c out = Mat3c::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        out(i, j) += w(3 * i + k, 3 * j + k);
  return out;
}

Mat3c positive_eigenspace_projector(const Mat3c& H, const Tolerances& tol) {
  const EigResult eig = eig_hermitian(H, tol);
  Mat3c p = Mat3c::Zero();
  for (int i = 0; i < 3; ++i) {
    if (eig.values[i] > tol.zero_eigenvalue) p += projector(eig.vectors[i]);
  }
  return p;
}

bool is_hermitian(const Mat3c& m, double tol) {
  return max_abs_asymmetry(m) <= tol;
}

bool is_density_operator(const Mat3c& m, const Tolerances& tol) {
  if (!is_hermitian(m, tol.hermiticity)) return false;
  if (std::abs(m.trace().real() - 1.0) > tol.trace_one) return false;
  if (std::abs(m.trace().imag()) > tol.trace_one) return false;
  const EigResult eig = eig_hermitian(m, tol);
  return eig.values[2] >= -tol.psd;
}

bool is_povm_element(const Mat3c& m, const Tolerances& tol) {
  if (!is_hermitian(m, tol.hermiticity)) return false;
  const EigResult eig = eig_hermitian(m, tol);
  return eig.values[2] >= -tol.povm_range && eig.values[0] <= 1.0 + tol.povm_range;
}

bool is_unitary9(const Mat9c& u, double tol) {
  return ((u.adjoint() * u) - Mat9c::Identity()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace cqkd
