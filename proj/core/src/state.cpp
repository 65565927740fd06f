#include "qthermo/state.hpp"

#include <cmath>

#include "qthermo/eig.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

void DensityMatrix::validate() const {
  if (mat.dim() == 0) throw InvalidState("density matrix is empty");
  if (!mat.all_finite()) throw InvalidState("density matrix has non-finite entries");
  const double herm = mat.hermiticity_error();
  if (herm > hermiticity_tol)
    throw InvalidState("density matrix not Hermitian: deviation " + std::to_string(herm));
  const double tr_dev = std::abs(mat.trace() - Complex{1.0, 0.0});
  if (tr_dev > trace_tol)
    throw InvalidState("density matrix trace deviates from 1 by " + std::to_string(tr_dev));
  const double lo = min_eigenvalue();
  if (lo < positivity_floor)
    throw InvalidState("density matrix has eigenvalue " + std::to_string(lo) +
                       " below the positivity floor");
}

double DensityMatrix::purity() const { return trace_product(mat, mat).real(); }

double DensityMatrix::min_eigenvalue() const {
  return hermitian_eig(mat.hermitized()).eigenvalues.front();
}

DensityMatrix DensityMatrix::pure(const std::vector<Complex>& amplitudes) {
  const int d = static_cast<int>(amplitudes.size());
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (norm2 <= 0.0) throw InvalidState("pure state amplitudes are all zero");
  ComplexMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i, j) = amplitudes[static_cast<std::size_t>(i)] *
                std::conj(amplitudes[static_cast<std::size_t>(j)]) / norm2;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / dim;
  return DensityMatrix(m);
}

}  // namespace qthermo
