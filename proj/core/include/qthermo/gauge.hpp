#pragma once

#include <functional>
#include <vector>

#include "qthermo/hamiltonian.hpp"
#include "qthermo/matrix.hpp"
#include "qthermo/random.hpp"
#include "qthermo/state.hpp"

namespace qthermo {

/// Block structure of the commutant group U(n_1) x ... x U(n_p) in a given
/// eigenframe.
struct GaugeStructure {
  std::vector<int> block_sizes;
  ComplexMatrix frame;

  int dim() const;
  int block_count() const { return static_cast<int>(block_sizes.size()); }
  int block_start(int k) const;

  static GaugeStructure from_decomposition(const SpectralDecomposition& decomp);
};

struct GaugeElement {
  ComplexMatrix matrix;               // V = u (+ v_k) u^dagger
  std::vector<ComplexMatrix> blocks;  // the sampled v_k
};

/// True iff v is unitary and commutes with h, both within tol (max-abs).
bool is_gauge_element(const ComplexMatrix& v, const ComplexMatrix& h, double tol);

std::vector<ComplexMatrix> sample_gauge_blocks(const GaugeStructure& s, RandomStream& rng);

/// Embed per-block unitaries into the full-dimensional block-diagonal matrix.
ComplexMatrix assemble_block_diagonal(const GaugeStructure& s,
                                      const std::vector<ComplexMatrix>& blocks);

GaugeElement sample_gauge_element(const GaugeStructure& s, RandomStream& rng);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

/// Monte-Carlo estimate of the group-averaged functional: the mean of
/// F(V rho V^dagger) over Haar-sampled gauge elements V, with its standard
/// error. The Haar measure is normalized, so no volume factor appears.
MonteCarloEstimate group_average(const std::function<double(const DensityMatrix&)>& functional,
                                 const DensityMatrix& rho, const GaugeStructure& s, int samples,
                                 RandomStream& rng);

struct TwirlResult {
  /// (1/N) sum_i (+ v_k^dagger) u^dagger M u (+ v_k): the eigenframe twirl.
  ComplexMatrix averaged;
  /// Max deviation from block-scalar form (diagonal blocks proportional to
  /// the identity, off-diagonal blocks zero).
  double block_scalar_defect = 0.0;
};

TwirlResult block_average_oracle(const ComplexMatrix& m, const GaugeStructure& s, int samples,
                                 RandomStream& rng);

/// Differentiable path of gauge-group blocks. Either constant blocks, or a
/// one-parameter subgroup B_k(t) = B_k(0) exp(i (t/tau) Theta_k) driven by a
/// sampled in-block Hermitian generator, so the endpoint B_k(tau) is again
/// Haar and dB/dt exists in closed form.
class GaugePath {
 public:
  static GaugePath fixed(std::vector<int> block_sizes, std::vector<ComplexMatrix> blocks);
  static GaugePath sample_fixed(const GaugeStructure& s, RandomStream& rng);
  static GaugePath sample_geodesic(const GaugeStructure& s, double tau, RandomStream& rng,
                                   double generator_scale = 1.0);

  /// Full-dimensional block-diagonal B(t).
  ComplexMatrix blocks_at(double t) const;
  /// Full-dimensional block-diagonal dB/dt.
  ComplexMatrix blocks_rate_at(double t) const;

  /// V(t) = u B(t) u^dagger for the supplied frame.
  ComplexMatrix element_at(double t, const ComplexMatrix& frame) const;
  /// dV/dt given the frame and its velocity overlaps (udot = u A):
  /// udot B u^dagger + u Bdot u^dagger + u B udot^dagger.
  ComplexMatrix element_rate_at(double t, const ComplexMatrix& frame,
                                const ComplexMatrix& overlaps) const;

 private:
  std::vector<int> block_sizes_;
  std::vector<ComplexMatrix> start_blocks_;
  bool time_dependent_ = false;
  double tau_ = 0.0;
  // Eigendecomposition of each block generator Theta_k.
  std::vector<ComplexMatrix> generator_vectors_;
  std::vector<std::vector<double>> generator_angles_;

  int dim() const;
  std::vector<ComplexMatrix> blocks_matrices_at(double t) const;
};

}  // namespace qthermo
