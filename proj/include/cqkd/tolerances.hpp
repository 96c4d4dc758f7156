#pragma once

#include <stdexcept>
#include <string>

namespace cqkd {

// Thrown when input data violates a documented precondition (bad matrices,
// malformed tables, out-of-range parameters). The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// All numeric tolerances in one place.
struct Tolerances {
  double hermiticity = 1e-10;      // max |H - H^dag| entry allowed before symmetrizing
  double trace_one = 1e-10;        // |tr(rho) - 1| for density operators
  double psd = 1e-10;              // -min eigenvalue allowed for density operators
  double povm_range = 1e-10;       // eigenvalue slack outside [0,1] for POVM elements
  double unitarity = 1e-10;        // |U^dag U - I| per entry
  double reconstruction = 1e-9;    // Frobenius error of eigendecomposition
  double orthonormality = 1e-9;    // pairwise eigenvector orthonormality
  double projector = 1e-9;         // |P^2 - P| for eigenspace projectors
  double zero_eigenvalue = 1e-9;   // eigenvalues below this count as zero
  double table_complement = 1e-9;  // |p(0) + p(1) - 1| in correlation tables
};

inline const Tolerances& tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace cqkd
