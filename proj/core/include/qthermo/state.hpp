#pragma once

#include <vector>

#include "qthermo/matrix.hpp"

namespace qthermo {

/// Density matrix: Hermitian, unit trace, positive semidefinite up to the
/// documented numerical slack.
struct DensityMatrix {
  ComplexMatrix mat;

  static constexpr double hermiticity_tol = 1e-10;
  static constexpr double trace_tol = 1e-10;
  static constexpr double positivity_floor = -1e-9;

  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix m) : mat(std::move(m)) {}

  int dim() const { return mat.dim(); }

  /// Throws InvalidState on any invariant violation.
  void validate() const;

  double purity() const;
  double min_eigenvalue() const;

  /// |psi><psi| from (not necessarily normalized) amplitudes.
  static DensityMatrix pure(const std::vector<Complex>& amplitudes);
  static DensityMatrix maximally_mixed(int dim);
};

}  // namespace qthermo
