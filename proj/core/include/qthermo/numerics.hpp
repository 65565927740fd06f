#pragma once

#include "qthermo/matrix.hpp"
#include "qthermo/random.hpp"
#include "qthermo/state.hpp"

namespace qthermo {

/// Haar-distributed unitary on U(n): complex Gaussian matrix followed by
/// modified Gram-Schmidt. The orthonormalization keeps the triangular
/// factor's diagonal positive real, which is exactly the convention that
/// makes the resulting Q Haar-uniform.
ComplexMatrix haar_unitary(int n, RandomStream& rng);

/// Von Neumann entropy in nats. Eigenvalues below eps_spectrum contribute
/// nothing; anything under the density-matrix positivity floor is rejected.
double von_neumann_entropy(const DensityMatrix& rho);

inline constexpr double eps_spectrum = 1e-14;

}  // namespace qthermo
