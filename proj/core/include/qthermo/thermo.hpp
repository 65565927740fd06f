#pragma once

#include <vector>

#include "qthermo/dynamics.hpp"
#include "qthermo/gauge.hpp"
#include "qthermo/hamiltonian.hpp"
#include "qthermo/matrix.hpp"
#include "qthermo/state.hpp"

namespace qthermo {

/// First-law bookkeeping along a trajectory. All integrals are cumulative
/// trapezoids on the state grid; the residual is reported, never absorbed.
struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> internal_energy;
  std::vector<double> work_raw_series;
  std::vector<double> work_invariant_series;
  std::vector<double> heat_usual_series;
  std::vector<double> heat_coherent_series;  // eigenbasis route
  std::vector<double> heat_invariant_series;
  std::vector<double> residual_series;

  double work_raw = 0.0;
  double work_invariant = 0.0;
  double heat_usual = 0.0;
  double heat_coherent_direct = 0.0;
  double heat_coherent = 0.0;
  double heat_invariant = 0.0;  // heat_usual + heat_coherent, by construction
  double delta_internal_energy = 0.0;
  double first_law_residual = 0.0;  // dU - W_inv - Q_inv, signed
};

/// Re Tr[rho H(t)]; throws InvalidState if the imaginary part exceeds 1e-10.
double mean_energy(const DensityMatrix& rho, const ComplexMatrix& h);
double mean_energy(const DensityMatrix& rho, const TimeDependentHamiltonian& h, double t);

/// Integral of Tr[rho_t dH_t/dt]: the raw, gauge-covariant work. The
/// Hamiltonian derivative comes from the attached model's closed form when
/// present and central differences otherwise.
double work_raw(const Trajectory& traj);

/// Integral of Tr[rho_t u_t dh_t/dt u_t^dagger]: couples only to eigenvalue
/// motion and is invariant under the emergent gauge.
double work_invariant(const Trajectory& traj);

/// Integral of Tr[drho/dt H_t].
double heat_usual(const Trajectory& traj);

struct CoherentHeatResult {
  double direct = 0.0;      // Tr[rho (udot h u^dagger + u h udot^dagger)], raw
                            // finite-difference frame derivative
  double eigenbasis = 0.0;  // off-diagonal sum over frame-velocity overlaps
};

/// Both coherent-heat evaluations. They are independent computations of the
/// same quantity; disagreement beyond mismatch_tol signals a frame
/// discontinuity and throws FormulaMismatch.
CoherentHeatResult heat_coherent(const Trajectory& traj, double mismatch_tol = 1e-7);

/// heat_usual + heat_coherent (eigenbasis route).
double heat_invariant(const Trajectory& traj);

double first_law_residual(const EnergyLedger& ledger);

/// Residual acceptance threshold 1e-6 * max(|dU|, energy scale).
double first_law_threshold(const EnergyLedger& ledger);

EnergyLedger compute_ledger(const Trajectory& traj, double qc_mismatch_tol = 1e-7);

/// C = S(rho_diag) - S(rho), with rho_diag the state dephased in the
/// decomposition's eigenframe.
double relative_entropy_of_coherence(const DensityMatrix& rho,
                                     const SpectralDecomposition& decomp);

/// U, W_inv and Q_inv assembled from eigenframe populations and eigenvalues
/// alone; coherences never enter. Q_inv uses higher-order differences of the
/// population series so the split is limited by quadrature, not by the
/// population derivative.
struct EigenframeQuantities {
  std::vector<double> internal_energy;
  double work_invariant = 0.0;
  double heat_invariant = 0.0;
};

EigenframeQuantities eigenframe_quantities(const Trajectory& traj);

/// States conjugated pointwise by the gauge path; spectral data carries
/// over, the dynamical model does not (the transformed states solve a
/// different master equation).
Trajectory apply_gauge_path(const Trajectory& traj, const GaugePath& path);

struct GaugeDefectResult {
  double omega_integral = 0.0;  // integral of Tr([H, rho] V^dagger dV/dt)
  double work_shift = 0.0;      // W_raw[V rho V^dagger] - W_raw[rho]
  double defect() const;
};

/// Transformation rule of the raw work under a differentiable gauge path:
/// both sides of W_raw -> W_raw + integral Tr(Omega_t), evaluated
/// independently.
GaugeDefectResult raw_work_gauge_defect(const Trajectory& traj, const GaugePath& path);

/// Monte-Carlo group average of the raw-work functional: each sample draws
/// one set of commutant blocks, applies them along the whole trajectory in
/// the instantaneous eigenframe, and evaluates the raw work of the
/// transformed states.
MonteCarloEstimate group_averaged_work(const Trajectory& traj, int samples, RandomStream& rng);

}  // namespace qthermo
