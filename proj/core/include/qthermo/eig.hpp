#pragma once

#include <vector>

#include "qthermo/matrix.hpp"

namespace qthermo {

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix vectors;            // columns are eigenvectors, unitary
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations with a fixed sweep
/// order, so results are bit-reproducible for identical inputs. Eigenvalues
/// come back ascending; ties keep the pre-sort column order.
///
/// Throws NotHermitian if max |M - M^dagger| exceeds hermiticity_tol, and
/// ConvergenceFailure if the off-diagonal norm has not collapsed after
/// max_sweeps sweeps.
HermitianEig hermitian_eig(const ComplexMatrix& m, double hermiticity_tol = 1e-10,
                           int max_sweeps = 60);

/// Unitary factor of the polar decomposition m = u p (p Hermitian PSD).
/// Requires m invertible; used to re-unitarize near-unitary matrices and to
/// align frames, where m is always well conditioned.
ComplexMatrix polar_unitary_factor(const ComplexMatrix& m);

/// exp(i * scale * g) for Hermitian g.
ComplexMatrix exp_ih(const ComplexMatrix& g, double scale);

}  // namespace qthermo
