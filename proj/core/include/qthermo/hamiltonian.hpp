#pragma once

#include <functional>
#include <vector>

#include "qthermo/matrix.hpp"

namespace qthermo {

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

inline constexpr double default_degeneracy_tol = 1e-8;

/// Instantaneous eigendata of a Hamiltonian: distinct eigenvalues in
/// ascending order, their multiplicities, and a diagonalizing frame whose
/// columns are grouped by cluster.
struct SpectralDecomposition {
  double t = 0.0;
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  ComplexMatrix frame;
  std::vector<int> cluster_of;  // column index -> cluster index

  int dim() const { return frame.dim(); }
  int cluster_count() const { return static_cast<int>(eigenvalues.size()); }
  int cluster_start(int k) const;
  double column_eigenvalue(int col) const {
    return eigenvalues[static_cast<std::size_t>(cluster_of[static_cast<std::size_t>(col)])];
  }
  /// h_t = diag of per-column eigenvalues.
  ComplexMatrix diagonal() const;
  /// u_t h_t u_t^dagger.
  ComplexMatrix reconstruct() const;
};

/// Frame-velocity overlaps A_{lj} = <a_l | da_j/dt>. Anti-Hermitian with
/// zero diagonal under the positive-overlap phase convention.
struct FrameVelocity {
  double t = 0.0;
  ComplexMatrix overlaps;
};

/// Closed-form eigendata a Hamiltonian may supply alongside its evaluator.
/// eigenvalue_rates may be left empty, in which case trajectory builders
/// fall back to finite differences of the eigenvalues.
struct AnalyticEigensystem {
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  ComplexMatrix frame;
  ComplexMatrix overlaps;
  std::vector<double> eigenvalue_rates;
};

class TimeDependentHamiltonian {
 public:
  using Evaluator = std::function<ComplexMatrix(double)>;
  using AnalyticFn = std::function<AnalyticEigensystem(double)>;
  using DerivativeFn = std::function<ComplexMatrix(double)>;

  TimeDependentHamiltonian(int dim, Evaluator evaluator);

  int dim() const { return dim_; }

  /// Evaluate H(t); the result is checked Hermitian to 1e-10.
  ComplexMatrix operator()(double t) const;

  TimeDependentHamiltonian& with_analytic_eigensystem(AnalyticFn fn);
  TimeDependentHamiltonian& with_analytic_derivative(DerivativeFn fn);

  bool has_analytic_eigensystem() const { return static_cast<bool>(analytic_); }
  AnalyticEigensystem analytic_eigensystem(double t) const;

  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  ComplexMatrix analytic_derivative(double t) const { return derivative_(t); }

  /// Decomposition for trajectory use: closed form when available, otherwise
  /// numeric spectral_decompose.
  SpectralDecomposition decompose(double t, double degeneracy_tol = default_degeneracy_tol) const;

 private:
  int dim_ = 0;
  Evaluator evaluator_;
  AnalyticFn analytic_;
  DerivativeFn derivative_;
};

/// Numeric eigendecomposition with gap-threshold clustering. Throws
/// AmbiguousClustering when an adjacent gap falls inside the guard band
/// (0.1*tol, tol) or a merged cluster spreads wider than tol.
SpectralDecomposition spectral_decompose(const ComplexMatrix& h_at_t, double t,
                                         double degeneracy_tol = default_degeneracy_tol);
SpectralDecomposition spectral_decompose(const TimeDependentHamiltonian& h, double t,
                                         double degeneracy_tol = default_degeneracy_tol);

/// Align cur's frame to prev's: non-degenerate columns are rephased to a
/// positive real overlap with the previous column; degenerate blocks are
/// rotated by the unitary polar factor of the block overlap. Throws
/// DegeneracyChanged if the multiplicity patterns differ.
SpectralDecomposition smooth_frame(const SpectralDecomposition& prev, SpectralDecomposition cur);

/// Central-difference frame velocity over a locally aligned stencil:
/// A = u^dagger(t) [u(t+dt) - u(t-dt)] / (2 dt), anti-Hermitized, diagonal
/// zeroed per the positive-overlap convention.
FrameVelocity frame_velocity(const TimeDependentHamiltonian& h, double t, double dt_fd,
                             double degeneracy_tol = default_degeneracy_tol);

/// Anti-Hermitize raw overlaps and zero the diagonal.
ComplexMatrix clean_overlaps(const ComplexMatrix& raw);

/// H_t = alpha(t) sigma_z, constant eigenframe.
TimeDependentHamiltonian builtin_scaled_sigma_z(std::function<double(double)> alpha);

/// H_t = sigma_z + gamma(t) sigma_x with closed-form eigensystem:
/// eigenvalues -/+ lambda, lambda^2 = 1 + gamma^2, and frame-velocity
/// overlap gamma_dot / (2 lambda^2).
TimeDependentHamiltonian builtin_driven_qubit(std::function<double(double)> gamma,
                                              std::function<double(double)> gamma_dot);

}  // namespace qthermo
