#pragma once

#include <optional>
#include <vector>

#include "qthermo/hamiltonian.hpp"
#include "qthermo/matrix.hpp"
#include "qthermo/state.hpp"

namespace qthermo {

/// Mean excitation number of a bath mode: 1 / (exp(beta*omega) - 1).
double mean_excitation(double beta, double omega);

/// Qubit dissipators from the two channels this library models.
/// Ground state is the sigma_z eigenvector with eigenvalue -1, i.e. the
/// second basis vector; the lowering operator maps excited to ground.
struct Dissipator {
  enum class Kind { Dephasing, GeneralizedAmplitudeDamping };

  Kind kind = Kind::Dephasing;
  double rate = 0.0;
  double nbar = 0.0;

  static Dissipator dephasing(double gamma_dec);
  static Dissipator generalized_amplitude_damping(double gamma_a, double nbar);

  /// D[rho]; defined on qubits only.
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

struct LindbladModel {
  TimeDependentHamiltonian hamiltonian;
  std::vector<Dissipator> dissipators;
};

/// -i [H(t), rho] + sum_j D_j[rho].
ComplexMatrix rhs(const LindbladModel& model, const ComplexMatrix& rho, double t);

struct TrajectoryStep {
  double t = 0.0;
  DensityMatrix state;
  SpectralDecomposition decomposition;
  FrameVelocity frame_velocity;
  std::vector<double> eigenvalue_rates;  // per cluster
};

struct Trajectory {
  double dt = 0.0;
  double degeneracy_tol = default_degeneracy_tol;
  std::vector<TrajectoryStep> steps;
  std::optional<LindbladModel> model;

  std::size_t size() const { return steps.size(); }
  double duration() const { return steps.empty() ? 0.0 : steps.back().t; }
};

/// Fixed-step RK4 on the master equation over [0, tau]. After each step the
/// state is Hermitized and trace-renormalized; positivity is monitored and
/// fails loudly (StateInvariantViolated) when the smallest eigenvalue drops
/// below -1e-6, which signals that dt is too large. Eigenframe data (aligned
/// frames, frame-velocity overlaps, eigenvalue rates) is attached to every
/// step, from closed form when the Hamiltonian provides it and from central
/// differences otherwise.
Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, double tau, double dt,
                  double degeneracy_tol = default_degeneracy_tol);

struct CoefficientTrajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<ComplexMatrix> coefficients;  // 2x2 eigenframe coefficients c_ij
};

/// RK4 integration of the driven-qubit eigenframe coefficient equations
///   c11' = -k (c12 + c21),     c12' = 2 i lambda c12 + k (c11 - c22),
///   c21' = -2 i lambda c21 - k (c22 - c11),  c22' = k (c12 + c21),
/// with k = gamma_dot / (2 lambda^2). An independent evolution path for the
/// same closed dynamics as evolve() on the driven qubit.
CoefficientTrajectory evolve_coefficients(const std::function<double(double)>& gamma,
                                          const std::function<double(double)>& gamma_dot,
                                          const ComplexMatrix& c0, double tau, double dt);

}  // namespace qthermo
