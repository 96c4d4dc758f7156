#pragma once

// Dense complex linear algebra for 3- and 9-dimensional Hermitian operators.
// Everything here is a pure function on immutable values.

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "cqkd/tolerances.hpp"

namespace cqkd {

using Complex = std::complex<double>;
using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;
using Mat9c = Eigen::Matrix<Complex, 9, 9>;

struct EigResult {
  std::array<double, 3> values;  // descending
  std::array<Vec3c, 3> vectors;  // orthonormal, vectors[i] pairs with values[i]
};

// Eigendecomposition of a Hermitian 3x3 matrix. Inputs Hermitian within the
// hermiticity tolerance are symmetrized first; anything worse throws.
EigResult eig_hermitian(const Mat3c& H, const Tolerances& tol = tolerances());

Mat9c kron(const Mat3c& a, const Mat3c& b);

// Trace over the second (Eve's) factor of a 9x9 operator on Bob (x) Eve.
Mat3c partial_trace_second(const Mat9c& w);

// Projector onto the strictly positive eigenspace of H: the maximizer of
// tr(H M) over 0 <= M <= I. Eigenvalues within the zero cutoff are excluded.
Mat3c positive_eigenspace_projector(const Mat3c& H, const Tolerances& tol = tolerances());

// Validity checks used across the toolkit.
bool is_hermitian(const Mat3c& m, double tol = tolerances().hermiticity);
bool is_density_operator(const Mat3c& m, const Tolerances& tol = tolerances());
bool is_povm_element(const Mat3c& m, const Tolerances& tol = tolerances());
bool is_unitary9(const Mat9c& u, double tol = tolerances().unitarity);

inline Mat3c projector(const Vec3c& v) { return v * v.adjoint(); }

// Zero the off-diagonal entries (computational-basis dephasing).
inline Mat3c dephase(const Mat3c& m) {
  Mat3c d = Mat3c::Zero();
  d.diagonal() = m.diagonal();
  return d;
}

inline double trace_real(const Mat3c& m) { return m.trace().real(); }

}  // namespace cqkd
