#include "qthermo/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qthermo/errors.hpp"

namespace qthermo {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j) s += 2.0 * std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m, double hermiticity_tol, int max_sweeps) {
  if (m.dim() == 0) throw InvalidArgument("hermitian_eig: empty matrix");
  if (!m.all_finite()) throw InvalidArgument("hermitian_eig: non-finite entries");
  if (m.hermiticity_error() > hermiticity_tol)
    throw NotHermitian("hermitian_eig: input deviates from Hermitian by " +
                       std::to_string(m.hermiticity_error()));

  const int d = m.dim();
  ComplexMatrix a = m.hermitized();
  ComplexMatrix v = ComplexMatrix::identity(d);

  const double scale = std::max(a.max_abs(), 1e-300);
  const double stop = 1e-15 * scale * d;

  int sweep = 0;
  while (off_diagonal_norm(a) > stop) {
    if (++sweep > max_sweeps)
      throw ConvergenceFailure("hermitian_eig: no convergence after " +
                               std::to_string(max_sweeps) + " sweeps");
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g <= 1e-18 * scale) continue;

        // Phase factor turning the (p,q) pivot real, then a real rotation.
        const Complex phase = apq / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // R has columns (c, -s conj(phase)) and (s phase_conj...) acting on
        // the (p,q) plane: col p -> c*col_p - s*conj(phase)*col_q,
        // col q -> s*phase... spelled out below via the 2x2 entries.
        const Complex rpp = c;
        const Complex rpq = s * phase;
        const Complex rqp = -s * std::conj(phase);
        const Complex rqq = c;

        // a <- R^dagger a R, touching only rows/cols p and q.
        for (int k = 0; k < d; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * rpp + akq * rqp;
          a(k, q) = akp * rpq + akq * rqq;
        }
        for (int k = 0; k < d; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(rpp) * apk + std::conj(rqp) * aqk;
          a(q, k) = std::conj(rpq) * apk + std::conj(rqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);

        for (int k = 0; k < d; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * rpp + vkq * rqp;
          v(k, q) = vkp * rpq + vkq * rqq;
        }
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEig out;
  out.eigenvalues.resize(d);
  out.vectors = ComplexMatrix(d);
  for (int j = 0; j < d; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]).real();
    for (int i = 0; i < d; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

ComplexMatrix polar_unitary_factor(const ComplexMatrix& m) {
  // u = m (m^dagger m)^{-1/2}
  const ComplexMatrix gram = m.adjoint() * m;
  const HermitianEig eig = hermitian_eig(gram, 1e-8);
  const int d = m.dim();
  ComplexMatrix inv_sqrt(d);
  for (int j = 0; j < d; ++j) {
    const double ev = eig.eigenvalues[static_cast<std::size_t>(j)];
    if (ev <= 1e-24)
      throw ConvergenceFailure("polar_unitary_factor: input is rank deficient");
    inv_sqrt(j, j) = 1.0 / std::sqrt(ev);
  }
  return m * (eig.vectors * inv_sqrt * eig.vectors.adjoint());
}

ComplexMatrix exp_ih(const ComplexMatrix& g, double scale) {
  const HermitianEig eig = hermitian_eig(g);
  const int d = g.dim();
  ComplexMatrix phases(d);
  for (int j = 0; j < d; ++j) {
    const double theta = scale * eig.eigenvalues[static_cast<std::size_t>(j)];
    phases(j, j) = Complex(std::cos(theta), std::sin(theta));
  }
  return eig.vectors * phases * eig.vectors.adjoint();
}

}  // namespace qthermo
