#include "qthermo/hamiltonian.hpp"

#include <cmath>
#include <utility>

#include "qthermo/eig.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }

ComplexMatrix pauli_y() {
  return ComplexMatrix(2, {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0});
}

ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

int SpectralDecomposition::cluster_start(int k) const {
  int start = 0;
  for (int i = 0; i < k; ++i) start += multiplicities[static_cast<std::size_t>(i)];
  return start;
}

ComplexMatrix SpectralDecomposition::diagonal() const {
  ComplexMatrix h(dim());
  for (int j = 0; j < dim(); ++j) h(j, j) = column_eigenvalue(j);
  return h;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return frame * diagonal() * frame.adjoint();
}

TimeDependentHamiltonian::TimeDependentHamiltonian(int dim, Evaluator evaluator)
    : dim_(dim), evaluator_(std::move(evaluator)) {
  if (dim_ < 1) throw InvalidArgument("Hamiltonian dimension must be positive");
  if (!evaluator_) throw InvalidArgument("Hamiltonian evaluator must be set");
}

ComplexMatrix TimeDependentHamiltonian::operator()(double t) const {
  ComplexMatrix h = evaluator_(t);
  if (h.dim() != dim_) throw DimensionMismatch("Hamiltonian evaluator returned wrong dimension");
  const double dev = h.hermiticity_error();
  if (dev > 1e-10)
    throw NotHermitian("H(t) deviates from Hermitian by " + std::to_string(dev) +
                       " at t=" + std::to_string(t));
  return h;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::with_analytic_eigensystem(AnalyticFn fn) {
  analytic_ = std::move(fn);
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::with_analytic_derivative(DerivativeFn fn) {
  derivative_ = std::move(fn);
  return *this;
}

AnalyticEigensystem TimeDependentHamiltonian::analytic_eigensystem(double t) const {
  if (!analytic_) throw InvalidArgument("Hamiltonian has no analytic eigensystem");
  return analytic_(t);
}

SpectralDecomposition TimeDependentHamiltonian::decompose(double t, double degeneracy_tol) const {
  if (!analytic_) return spectral_decompose(*this, t, degeneracy_tol);
  const AnalyticEigensystem sys = analytic_(t);
  SpectralDecomposition d;
  d.t = t;
  d.eigenvalues = sys.eigenvalues;
  d.multiplicities = sys.multiplicities;
  d.frame = sys.frame;
  d.cluster_of.clear();
  for (int k = 0; k < static_cast<int>(sys.multiplicities.size()); ++k)
    for (int i = 0; i < sys.multiplicities[static_cast<std::size_t>(k)]; ++i)
      d.cluster_of.push_back(k);
  return d;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& h_at_t, double t,
                                         double degeneracy_tol) {
  if (degeneracy_tol <= 0.0) throw InvalidArgument("degeneracy_tol must be positive");
  const HermitianEig eig = hermitian_eig(h_at_t);
  const int d = h_at_t.dim();

  SpectralDecomposition out;
  out.t = t;
  out.frame = eig.vectors;
  out.cluster_of.assign(static_cast<std::size_t>(d), 0);

  int cluster = 0;
  std::size_t cluster_begin = 0;
  for (std::size_t i = 0; i + 1 <= static_cast<std::size_t>(d); ++i) {
    const bool last = (i + 1 == static_cast<std::size_t>(d));
    double gap = 0.0;
    if (!last) gap = eig.eigenvalues[i + 1] - eig.eigenvalues[i];
    if (!last && gap < degeneracy_tol) {
      if (gap > 0.1 * degeneracy_tol)
        throw AmbiguousClustering("eigenvalue gap " + std::to_string(gap) +
                                  " lies inside the guard band of tol " +
                                  std::to_string(degeneracy_tol));
      out.cluster_of[i + 1] = cluster;
      continue;
    }
    const std::size_t cluster_end = i + 1;
    const double spread =
        eig.eigenvalues[cluster_end - 1] - eig.eigenvalues[cluster_begin];
    if (spread >= degeneracy_tol)
      throw AmbiguousClustering("cluster spread " + std::to_string(spread) +
                                " reaches the degeneracy tolerance");
    double mean = 0.0;
    for (std::size_t k = cluster_begin; k < cluster_end; ++k) mean += eig.eigenvalues[k];
    mean /= static_cast<double>(cluster_end - cluster_begin);
    out.eigenvalues.push_back(mean);
    out.multiplicities.push_back(static_cast<int>(cluster_end - cluster_begin));
    if (!last) {
      ++cluster;
      out.cluster_of[i + 1] = cluster;
      cluster_begin = cluster_end;
    }
  }
  return out;
}

SpectralDecomposition spectral_decompose(const TimeDependentHamiltonian& h, double t,
                                         double degeneracy_tol) {
  return spectral_decompose(h(t), t, degeneracy_tol);
}

SpectralDecomposition smooth_frame(const SpectralDecomposition& prev, SpectralDecomposition cur) {
  if (prev.dim() != cur.dim()) throw DimensionMismatch("smooth_frame: dimension mismatch");
  if (prev.multiplicities != cur.multiplicities)
    throw DegeneracyChanged("multiplicity pattern changed between adjacent steps");

  const int d = cur.dim();
  for (int k = 0; k < cur.cluster_count(); ++k) {
    const int start = cur.cluster_start(k);
    const int nk = cur.multiplicities[static_cast<std::size_t>(k)];
    // S = cur_block^dagger prev_block; closest in-block unitary is the polar
    // factor of S. For nk = 1 this is exactly the positive-overlap phase fix.
    ComplexMatrix s(nk);
    for (int a = 0; a < nk; ++a)
      for (int b = 0; b < nk; ++b) {
        Complex acc{0.0, 0.0};
        for (int i = 0; i < d; ++i)
          acc += std::conj(cur.frame(i, start + a)) * prev.frame(i, start + b);
        s(a, b) = acc;
      }
    const ComplexMatrix r = polar_unitary_factor(s);
    std::vector<std::vector<Complex>> old_cols(static_cast<std::size_t>(nk));
    for (int a = 0; a < nk; ++a)
      old_cols[static_cast<std::size_t>(a)] = cur.frame.column(start + a);
    for (int b = 0; b < nk; ++b) {
      std::vector<Complex> col(static_cast<std::size_t>(d), Complex{0.0, 0.0});
      for (int a = 0; a < nk; ++a) {
        const Complex rab = r(a, b);
        for (int i = 0; i < d; ++i)
          col[static_cast<std::size_t>(i)] +=
              old_cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] * rab;
      }
      cur.frame.set_column(start + b, col);
    }
  }
  return cur;
}

ComplexMatrix clean_overlaps(const ComplexMatrix& raw) {
  const int d = raw.dim();
  ComplexMatrix a(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = 0.5 * (raw(i, j) - std::conj(raw(j, i)));
  for (int i = 0; i < d; ++i) a(i, i) = 0.0;
  return a;
}

FrameVelocity frame_velocity(const TimeDependentHamiltonian& h, double t, double dt_fd,
                             double degeneracy_tol) {
  if (dt_fd <= 0.0) throw InvalidArgument("frame_velocity: dt_fd must be positive");
  SpectralDecomposition left = spectral_decompose(h, t - dt_fd, degeneracy_tol);
  SpectralDecomposition mid = smooth_frame(left, spectral_decompose(h, t, degeneracy_tol));
  SpectralDecomposition right = smooth_frame(mid, spectral_decompose(h, t + dt_fd, degeneracy_tol));

  const int d = mid.dim();
  ComplexMatrix raw(d);
  for (int l = 0; l < d; ++l)
    for (int j = 0; j < d; ++j) {
      Complex acc{0.0, 0.0};
      for (int i = 0; i < d; ++i)
        acc += std::conj(mid.frame(i, l)) * (right.frame(i, j) - left.frame(i, j));
      raw(l, j) = acc / (2.0 * dt_fd);
    }
  return FrameVelocity{t, clean_overlaps(raw)};
}

TimeDependentHamiltonian builtin_scaled_sigma_z(std::function<double(double)> alpha) {
  auto evaluator = [alpha](double t) {
    const double a = alpha(t);
    return ComplexMatrix(2, {a, 0.0, 0.0, -a});
  };
  auto analytic = [alpha](double t) {
    const double a = alpha(t);
    AnalyticEigensystem sys;
    sys.overlaps = ComplexMatrix(2);
    if (a == 0.0) {
      sys.eigenvalues = {0.0};
      sys.multiplicities = {2};
      sys.frame = ComplexMatrix::identity(2);
      return sys;
    }
    sys.multiplicities = {1, 1};
    if (a > 0.0) {
      sys.eigenvalues = {-a, a};
      sys.frame = ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
    } else {
      sys.eigenvalues = {a, -a};
      sys.frame = ComplexMatrix::identity(2);
    }
    return sys;
  };
  TimeDependentHamiltonian h(2, evaluator);
  h.with_analytic_eigensystem(analytic);
  return h;
}

TimeDependentHamiltonian builtin_driven_qubit(std::function<double(double)> gamma,
                                              std::function<double(double)> gamma_dot) {
  auto evaluator = [gamma](double t) {
    const double g = gamma(t);
    return ComplexMatrix(2, {1.0, g, g, -1.0});
  };
  auto analytic = [gamma, gamma_dot](double t) {
    const double g = gamma(t);
    const double gd = gamma_dot(t);
    const double lam = std::sqrt(1.0 + g * g);
    const double lamdot = g * gd / lam;
    const double norm = std::sqrt(2.0 * lam * (lam + 1.0));
    AnalyticEigensystem sys;
    sys.eigenvalues = {-lam, lam};
    sys.multiplicities = {1, 1};
    sys.eigenvalue_rates = {-lamdot, lamdot};
    // Columns (-g, 1+lam)/norm and (1+lam, g)/norm stay smooth through g = 0.
    sys.frame = ComplexMatrix(2, {-g / norm, (1.0 + lam) / norm, (1.0 + lam) / norm, g / norm});
    const double kappa = gd / (2.0 * lam * lam);  // <a_1 | da_2/dt>
    sys.overlaps = ComplexMatrix(2, {0.0, kappa, -kappa, 0.0});
    return sys;
  };
  auto derivative = [gamma_dot](double t) {
    const double gd = gamma_dot(t);
    return ComplexMatrix(2, {0.0, gd, gd, 0.0});
  };
  TimeDependentHamiltonian h(2, evaluator);
  h.with_analytic_eigensystem(analytic);
  h.with_analytic_derivative(derivative);
  return h;
}

}  // namespace qthermo
