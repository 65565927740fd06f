#include "qthermo/numerics.hpp"

#include <cmath>

#include "qthermo/eig.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

ComplexMatrix haar_unitary(int n, RandomStream& rng) {
  if (n < 1) throw InvalidArgument("haar_unitary: n must be >= 1");
  ComplexMatrix z(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = rng.complex_gaussian();

  // Modified Gram-Schmidt with one reorthogonalization pass. Column norms
  // (the R diagonal) are positive real by construction.
  for (int j = 0; j < n; ++j) {
    auto col = z.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        const auto prev = z.column(k);
        Complex overlap{0.0, 0.0};
        for (int i = 0; i < n; ++i) overlap += std::conj(prev[i]) * col[i];
        for (int i = 0; i < n; ++i) col[i] -= overlap * prev[i];
      }
    }
    double norm2 = 0.0;
    for (const auto& c : col) norm2 += std::norm(c);
    const double norm = std::sqrt(norm2);
    if (norm < 1e-150) throw ConvergenceFailure("haar_unitary: degenerate Gaussian draw");
    for (auto& c : col) c /= norm;
    z.set_column(j, col);
  }
  return z;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  rho.validate();
  const HermitianEig eig = hermitian_eig(rho.mat.hermitized());
  double s = 0.0;
  for (const double ev : eig.eigenvalues) {
    if (ev > eps_spectrum) s -= ev * std::log(ev);
  }
  return std::max(s, 0.0);
}

}  // namespace qthermo
