#pragma once

#include <vector>

#include "qthermo/hamiltonian.hpp"
#include "qthermo/matrix.hpp"
#include "qthermo/random.hpp"
#include "qthermo/state.hpp"

namespace qthermo {

/// Projectors onto the distinct energy levels of a decomposition:
/// Pi^l = u (+_k delta_kl 1_{n_k}) u^dagger, one per cluster.
std::vector<ComplexMatrix> energy_projectors(const SpectralDecomposition& decomp);

/// Propagator of the closed dynamics: RK4 on dU/dt = -i H(t) U from the
/// identity, re-unitarized once by its polar factor.
ComplexMatrix schrodinger_propagator(const TimeDependentHamiltonian& h, double tau, double dt);

/// Two-point-measurement work statistics. Outcome indexing follows the
/// ascending distinct eigenvalues at each endpoint.
struct TpmDistribution {
  std::vector<double> initial_levels;               // eps_n(0)
  std::vector<double> final_levels;                 // eps_m(tau)
  std::vector<std::vector<double>> probabilities;   // p[m][n]
  std::vector<std::vector<double>> work_values;     // W[m][n] = eps_m(tau) - eps_n(0)

  double total_probability() const;
  double mean_work() const;
  double work_second_moment() const;
};

/// p_{m,n} = Tr[Pi_tau^m U Pi_0^n rho_0 Pi_0^n U^dagger]. The process must
/// be unitary to 1e-10 (NonUnitaryProcess otherwise). Probabilities in
/// [-1e-14, 0) are clamped to zero; anything lower is rejected.
TpmDistribution tpm_distribution(const DensityMatrix& rho0, const ComplexMatrix& process,
                                 const SpectralDecomposition& d0,
                                 const SpectralDecomposition& dtau);

/// Recomputes the distribution under sampled gauge transformations
/// (rho_0 -> V_0 rho_0 V_0^dagger, U -> V_tau U V_0^dagger) and returns the
/// largest |delta p| seen. Algebraically zero; anything beyond roundoff
/// indicates broken projector covariance.
double tpm_gauge_invariance(const DensityMatrix& rho0, const ComplexMatrix& process,
                            const SpectralDecomposition& d0, const SpectralDecomposition& dtau,
                            int samples, RandomStream& rng);

}  // namespace qthermo
