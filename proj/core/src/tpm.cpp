#include "qthermo/tpm.hpp"

#include <cmath>

#include "qthermo/eig.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/gauge.hpp"

namespace qthermo {

std::vector<ComplexMatrix> energy_projectors(const SpectralDecomposition& decomp) {
  const int d = decomp.dim();
  std::vector<ComplexMatrix> projectors;
  projectors.reserve(static_cast<std::size_t>(decomp.cluster_count()));
  for (int k = 0; k < decomp.cluster_count(); ++k) {
    const int start = decomp.cluster_start(k);
    const int nk = decomp.multiplicities[static_cast<std::size_t>(k)];
    ComplexMatrix p(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Complex acc{0.0, 0.0};
        for (int a = 0; a < nk; ++a)
          acc += decomp.frame(i, start + a) * std::conj(decomp.frame(j, start + a));
        p(i, j) = acc;
      }
    projectors.push_back(std::move(p));
  }
  return projectors;
}

ComplexMatrix schrodinger_propagator(const TimeDependentHamiltonian& h, double tau, double dt) {
  if (dt <= 0.0) throw InvalidArgument("schrodinger_propagator: dt must be positive");
  if (tau < 0.0) throw InvalidArgument("schrodinger_propagator: tau must be >= 0");
  const double ratio = tau / dt;
  const long long n = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("schrodinger_propagator: tau must be an integral number of steps dt");

  ComplexMatrix u = ComplexMatrix::identity(h.dim());
  const Complex minus_i{0.0, -1.0};
  for (long long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const ComplexMatrix k1 = minus_i * (h(t) * u);
    const ComplexMatrix k2 = minus_i * (h(t + 0.5 * dt) * (u + 0.5 * dt * k1));
    const ComplexMatrix k3 = minus_i * (h(t + 0.5 * dt) * (u + 0.5 * dt * k2));
    const ComplexMatrix k4 = minus_i * (h(t + dt) * (u + dt * k3));
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (n == 0) return u;
  return polar_unitary_factor(u);
}

double TpmDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& row : probabilities)
    for (const double p : row) s += p;
  return s;
}

double TpmDistribution::mean_work() const {
  double s = 0.0;
  for (std::size_t m = 0; m < probabilities.size(); ++m)
    for (std::size_t n = 0; n < probabilities[m].size(); ++n)
      s += probabilities[m][n] * work_values[m][n];
  return s;
}

double TpmDistribution::work_second_moment() const {
  double s = 0.0;
  for (std::size_t m = 0; m < probabilities.size(); ++m)
    for (std::size_t n = 0; n < probabilities[m].size(); ++n)
      s += probabilities[m][n] * work_values[m][n] * work_values[m][n];
  return s;
}

TpmDistribution tpm_distribution(const DensityMatrix& rho0, const ComplexMatrix& process,
                                 const SpectralDecomposition& d0,
                                 const SpectralDecomposition& dtau) {
  rho0.validate();
  if (process.dim() != rho0.dim() || d0.dim() != rho0.dim() || dtau.dim() != rho0.dim())
    throw DimensionMismatch("tpm_distribution: dimension mismatch");
  const double unit_dev = process.unitarity_error();
  if (unit_dev > 1e-10)
    throw NonUnitaryProcess("process deviates from unitary by " + std::to_string(unit_dev));

  const auto proj0 = energy_projectors(d0);
  const auto projt = energy_projectors(dtau);

  TpmDistribution dist;
  dist.initial_levels = d0.eigenvalues;
  dist.final_levels = dtau.eigenvalues;
  const std::size_t rows = projt.size();
  const std::size_t cols = proj0.size();
  dist.probabilities.assign(rows, std::vector<double>(cols, 0.0));
  dist.work_values.assign(rows, std::vector<double>(cols, 0.0));

  const ComplexMatrix udag = process.adjoint();
  for (std::size_t n = 0; n < cols; ++n) {
    const ComplexMatrix projected = proj0[n] * rho0.mat * proj0[n];
    const ComplexMatrix evolved = process * projected * udag;
    for (std::size_t m = 0; m < rows; ++m) {
      double p = trace_product(projt[m], evolved).real();
      if (p < 0.0) {
        if (p < -1e-14)
          throw InvalidState("tpm_distribution: probability " + std::to_string(p) +
                             " below clamp floor");
        p = 0.0;
      }
      dist.probabilities[m][n] = p;
      dist.work_values[m][n] = dtau.eigenvalues[m] - d0.eigenvalues[n];
    }
  }
  return dist;
}

double tpm_gauge_invariance(const DensityMatrix& rho0, const ComplexMatrix& process,
                            const SpectralDecomposition& d0, const SpectralDecomposition& dtau,
                            int samples, RandomStream& rng) {
  const TpmDistribution base = tpm_distribution(rho0, process, d0, dtau);
  const GaugeStructure s0 = GaugeStructure::from_decomposition(d0);
  const GaugeStructure st = GaugeStructure::from_decomposition(dtau);

  double max_dev = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ComplexMatrix v0 = sample_gauge_element(s0, rng).matrix;
    const ComplexMatrix vt = sample_gauge_element(st, rng).matrix;
    const ComplexMatrix transformed_process = vt * process * v0.adjoint();
    const DensityMatrix transformed_state(conjugate_by(v0, rho0.mat));
    const TpmDistribution shifted =
        tpm_distribution(transformed_state, transformed_process, d0, dtau);
    for (std::size_t m = 0; m < base.probabilities.size(); ++m)
      for (std::size_t n = 0; n < base.probabilities[m].size(); ++n)
        max_dev = std::max(max_dev,
                           std::abs(shifted.probabilities[m][n] - base.probabilities[m][n]));
  }
  return max_dev;
}

}  // namespace qthermo
