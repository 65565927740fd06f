#include "qthermo/thermo.hpp"

#include <cmath>

#include "qthermo/errors.hpp"
#include "qthermo/numerics.hpp"

namespace qthermo {

namespace {

double trapezoid(const std::vector<double>& integrand, double dt) {
  if (integrand.size() < 2) return 0.0;
  double s = 0.0;
  for (const double v : integrand) s += v;
  s -= 0.5 * (integrand.front() + integrand.back());
  return s * dt;
}

std::vector<double> trapezoid_cumulative(const std::vector<double>& integrand, double dt) {
  std::vector<double> out(integrand.size(), 0.0);
  for (std::size_t i = 1; i < integrand.size(); ++i)
    out[i] = out[i - 1] + 0.5 * dt * (integrand[i - 1] + integrand[i]);
  return out;
}

template <typename T>
std::vector<T> fd_derivative(const std::vector<T>& f, double dt, const T& zero) {
  const std::size_t n = f.size();
  std::vector<T> out(n, zero);
  if (n < 2) return out;
  if (n == 2) {
    out[0] = (f[1] - f[0]) * (1.0 / dt);
    out[1] = out[0];
    return out;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * (1.0 / (2.0 * dt));
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * (1.0 / (2.0 * dt));
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * (1.0 / (2.0 * dt));
  return out;
}

/// Fourth-order central differences in the interior, falling back to
/// second order near the edges.
std::vector<double> fd_derivative4(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size();
  if (n < 5) return fd_derivative(f, dt, 0.0);
  std::vector<double> out = fd_derivative(f, dt, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * dt);
  return out;
}

std::vector<ComplexMatrix> hamiltonian_series(const Trajectory& traj) {
  std::vector<ComplexMatrix> h;
  h.reserve(traj.size());
  for (const auto& step : traj.steps) {
    if (traj.model)
      h.push_back(traj.model->hamiltonian(step.t));
    else
      h.push_back(step.decomposition.reconstruct());
  }
  return h;
}

std::vector<ComplexMatrix> hamiltonian_rate_series(const Trajectory& traj,
                                                   const std::vector<ComplexMatrix>& h) {
  if (traj.model && traj.model->hamiltonian.has_analytic_derivative()) {
    std::vector<ComplexMatrix> hdot;
    hdot.reserve(traj.size());
    for (const auto& step : traj.steps)
      hdot.push_back(traj.model->hamiltonian.analytic_derivative(step.t));
    return hdot;
  }
  const int d = traj.steps.front().state.dim();
  return fd_derivative(h, traj.dt, ComplexMatrix(d));
}

std::vector<ComplexMatrix> state_rate_series(const Trajectory& traj) {
  const int d = traj.steps.front().state.dim();
  if (traj.model) {
    std::vector<ComplexMatrix> out;
    out.reserve(traj.size());
    for (const auto& step : traj.steps) out.push_back(rhs(*traj.model, step.state.mat, step.t));
    return out;
  }
  std::vector<ComplexMatrix> states;
  states.reserve(traj.size());
  for (const auto& step : traj.steps) states.push_back(step.state.mat);
  return fd_derivative(states, traj.dt, ComplexMatrix(d));
}

ComplexMatrix eigenframe_coefficients(const TrajectoryStep& step) {
  return conjugate_by_adjoint(step.decomposition.frame, step.state.mat);
}

std::vector<double> column_rates(const TrajectoryStep& step) {
  const auto& d = step.decomposition;
  std::vector<double> rates(static_cast<std::size_t>(d.dim()), 0.0);
  if (step.eigenvalue_rates.empty()) return rates;
  for (int j = 0; j < d.dim(); ++j)
    rates[static_cast<std::size_t>(j)] =
        step.eigenvalue_rates[static_cast<std::size_t>(d.cluster_of[static_cast<std::size_t>(j)])];
  return rates;
}

void require_trajectory(const Trajectory& traj, const char* context) {
  if (traj.steps.empty()) throw InvalidArgument(std::string(context) + ": empty trajectory");
}

std::vector<double> work_invariant_integrand(const Trajectory& traj) {
  std::vector<double> integrand;
  integrand.reserve(traj.size());
  for (const auto& step : traj.steps) {
    const ComplexMatrix c = eigenframe_coefficients(step);
    const auto rates = column_rates(step);
    double v = 0.0;
    for (int j = 0; j < c.dim(); ++j) v += c(j, j).real() * rates[static_cast<std::size_t>(j)];
    integrand.push_back(v);
  }
  return integrand;
}

std::vector<double> heat_usual_integrand(const Trajectory& traj,
                                         const std::vector<ComplexMatrix>& h,
                                         const std::vector<ComplexMatrix>& rho_dot) {
  std::vector<double> integrand(traj.size(), 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i)
    integrand[i] = trace_product(rho_dot[i], h[i]).real();
  return integrand;
}

std::vector<double> heat_coherent_eigenbasis_integrand(const Trajectory& traj) {
  std::vector<double> integrand;
  integrand.reserve(traj.size());
  for (const auto& step : traj.steps) {
    const ComplexMatrix c = eigenframe_coefficients(step);
    const ComplexMatrix a = step.frame_velocity.overlaps.empty()
                                ? ComplexMatrix(c.dim())
                                : step.frame_velocity.overlaps;
    const auto& decomp = step.decomposition;
    double v = 0.0;
    for (int j = 0; j < c.dim(); ++j)
      for (int l = 0; l < c.dim(); ++l) {
        const double gap = decomp.column_eigenvalue(j) - decomp.column_eigenvalue(l);
        if (gap == 0.0) continue;
        v += (c(j, l) * a(l, j)).real() * gap;
      }
    integrand.push_back(v);
  }
  return integrand;
}

std::vector<double> heat_coherent_direct_integrand(const Trajectory& traj) {
  const int d = traj.steps.front().state.dim();
  std::vector<ComplexMatrix> frames;
  frames.reserve(traj.size());
  for (const auto& step : traj.steps) frames.push_back(step.decomposition.frame);
  const auto frame_rates = fd_derivative(frames, traj.dt, ComplexMatrix(d));

  std::vector<double> integrand(traj.size(), 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& step = traj.steps[i];
    const ComplexMatrix udot_h_udag =
        frame_rates[i] * step.decomposition.diagonal() * step.decomposition.frame.adjoint();
    integrand[i] = 2.0 * trace_product(step.state.mat, udot_h_udag).real();
  }
  return integrand;
}

}  // namespace

double mean_energy(const DensityMatrix& rho, const ComplexMatrix& h) {
  const Complex value = trace_product(rho.mat, h);
  if (std::abs(value.imag()) >= 1e-10)
    throw InvalidState("mean energy has imaginary part " + std::to_string(value.imag()));
  return value.real();
}

double mean_energy(const DensityMatrix& rho, const TimeDependentHamiltonian& h, double t) {
  return mean_energy(rho, h(t));
}

double work_raw(const Trajectory& traj) {
  require_trajectory(traj, "work_raw");
  const auto h = hamiltonian_series(traj);
  const auto hdot = hamiltonian_rate_series(traj, h);
  std::vector<double> integrand(traj.size(), 0.0);
  for (std::size_t i = 0; i < traj.size(); ++i)
    integrand[i] = trace_product(traj.steps[i].state.mat, hdot[i]).real();
  return trapezoid(integrand, traj.dt);
}

double work_invariant(const Trajectory& traj) {
  require_trajectory(traj, "work_invariant");
  return trapezoid(work_invariant_integrand(traj), traj.dt);
}

double heat_usual(const Trajectory& traj) {
  require_trajectory(traj, "heat_usual");
  const auto h = hamiltonian_series(traj);
  const auto rho_dot = state_rate_series(traj);
  return trapezoid(heat_usual_integrand(traj, h, rho_dot), traj.dt);
}

CoherentHeatResult heat_coherent(const Trajectory& traj, double mismatch_tol) {
  require_trajectory(traj, "heat_coherent");
  CoherentHeatResult out;
  out.direct = trapezoid(heat_coherent_direct_integrand(traj), traj.dt);
  out.eigenbasis = trapezoid(heat_coherent_eigenbasis_integrand(traj), traj.dt);
  if (std::abs(out.direct - out.eigenbasis) > mismatch_tol)
    throw FormulaMismatch("coherent heat evaluations disagree: direct " +
                          std::to_string(out.direct) + " vs eigenbasis " +
                          std::to_string(out.eigenbasis) +
                          " (frame discontinuity or dt too large)");
  return out;
}

double heat_invariant(const Trajectory& traj) {
  return heat_usual(traj) + heat_coherent(traj).eigenbasis;
}

double first_law_residual(const EnergyLedger& ledger) { return ledger.first_law_residual; }

double first_law_threshold(const EnergyLedger& ledger) {
  double scale = std::abs(ledger.delta_internal_energy);
  for (const double u : ledger.internal_energy) scale = std::max(scale, std::abs(u));
  return 1e-6 * std::max(scale, 1.0);
}

EnergyLedger compute_ledger(const Trajectory& traj, double qc_mismatch_tol) {
  require_trajectory(traj, "compute_ledger");
  const auto h = hamiltonian_series(traj);
  const auto hdot = hamiltonian_rate_series(traj, h);
  const auto rho_dot = state_rate_series(traj);

  EnergyLedger ledger;
  const std::size_t n = traj.size();
  ledger.times.reserve(n);
  ledger.internal_energy.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ledger.times.push_back(traj.steps[i].t);
    ledger.internal_energy.push_back(mean_energy(traj.steps[i].state, h[i]));
  }

  std::vector<double> raw_integrand(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    raw_integrand[i] = trace_product(traj.steps[i].state.mat, hdot[i]).real();
  ledger.work_raw_series = trapezoid_cumulative(raw_integrand, traj.dt);
  ledger.work_invariant_series = trapezoid_cumulative(work_invariant_integrand(traj), traj.dt);
  ledger.heat_usual_series =
      trapezoid_cumulative(heat_usual_integrand(traj, h, rho_dot), traj.dt);
  ledger.heat_coherent_series =
      trapezoid_cumulative(heat_coherent_eigenbasis_integrand(traj), traj.dt);
  const double qc_direct = trapezoid(heat_coherent_direct_integrand(traj), traj.dt);

  ledger.heat_invariant_series.resize(n);
  ledger.residual_series.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ledger.heat_invariant_series[i] =
        ledger.heat_usual_series[i] + ledger.heat_coherent_series[i];
    ledger.residual_series[i] = ledger.internal_energy[i] - ledger.internal_energy[0] -
                                ledger.work_invariant_series[i] -
                                ledger.heat_invariant_series[i];
  }

  ledger.work_raw = ledger.work_raw_series.back();
  ledger.work_invariant = ledger.work_invariant_series.back();
  ledger.heat_usual = ledger.heat_usual_series.back();
  ledger.heat_coherent = ledger.heat_coherent_series.back();
  ledger.heat_coherent_direct = qc_direct;
  ledger.heat_invariant = ledger.heat_invariant_series.back();
  ledger.delta_internal_energy = ledger.internal_energy.back() - ledger.internal_energy.front();
  ledger.first_law_residual = ledger.residual_series.back();

  if (std::abs(qc_direct - ledger.heat_coherent) > qc_mismatch_tol)
    throw FormulaMismatch("coherent heat evaluations disagree: direct " +
                          std::to_string(qc_direct) + " vs eigenbasis " +
                          std::to_string(ledger.heat_coherent));
  return ledger;
}

double relative_entropy_of_coherence(const DensityMatrix& rho,
                                     const SpectralDecomposition& decomp) {
  if (rho.dim() != decomp.dim())
    throw DimensionMismatch("relative_entropy_of_coherence: dimension mismatch");
  const ComplexMatrix c = conjugate_by_adjoint(decomp.frame, rho.mat);
  double s_diag = 0.0;
  for (int j = 0; j < c.dim(); ++j) {
    const double p = c(j, j).real();
    if (p > eps_spectrum) s_diag -= p * std::log(p);
  }
  return s_diag - von_neumann_entropy(rho);
}

EigenframeQuantities eigenframe_quantities(const Trajectory& traj) {
  require_trajectory(traj, "eigenframe_quantities");
  const std::size_t n = traj.size();
  const int d = traj.steps.front().state.dim();

  std::vector<std::vector<double>> populations(static_cast<std::size_t>(d),
                                               std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> col_eps(static_cast<std::size_t>(d),
                                           std::vector<double>(n, 0.0));
  EigenframeQuantities out;
  out.internal_energy.assign(n, 0.0);
  std::vector<double> work_integrand(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& step = traj.steps[i];
    const ComplexMatrix c = eigenframe_coefficients(step);
    const auto rates = column_rates(step);
    for (int j = 0; j < d; ++j) {
      const double p = c(j, j).real();
      const double eps = step.decomposition.column_eigenvalue(j);
      populations[static_cast<std::size_t>(j)][i] = p;
      col_eps[static_cast<std::size_t>(j)][i] = eps;
      out.internal_energy[i] += p * eps;
      work_integrand[i] += p * rates[static_cast<std::size_t>(j)];
    }
  }
  out.work_invariant = trapezoid(work_integrand, traj.dt);

  std::vector<double> heat_integrand(n, 0.0);
  for (int j = 0; j < d; ++j) {
    const auto pdot = fd_derivative4(populations[static_cast<std::size_t>(j)], traj.dt);
    for (std::size_t i = 0; i < n; ++i)
      heat_integrand[i] += pdot[i] * col_eps[static_cast<std::size_t>(j)][i];
  }
  out.heat_invariant = trapezoid(heat_integrand, traj.dt);
  return out;
}

Trajectory apply_gauge_path(const Trajectory& traj, const GaugePath& path) {
  Trajectory out;
  out.dt = traj.dt;
  out.degeneracy_tol = traj.degeneracy_tol;
  out.steps = traj.steps;
  out.model.reset();
  for (auto& step : out.steps) {
    const ComplexMatrix v = path.element_at(step.t, step.decomposition.frame);
    step.state = DensityMatrix(conjugate_by(v, step.state.mat));
  }
  return out;
}

double GaugeDefectResult::defect() const { return std::abs(work_shift - omega_integral); }

GaugeDefectResult raw_work_gauge_defect(const Trajectory& traj, const GaugePath& path) {
  require_trajectory(traj, "raw_work_gauge_defect");
  const auto h = hamiltonian_series(traj);
  const auto hdot = hamiltonian_rate_series(traj, h);
  const std::size_t n = traj.size();

  std::vector<double> omega_integrand(n, 0.0);
  std::vector<double> shift_integrand(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& step = traj.steps[i];
    const ComplexMatrix v = path.element_at(step.t, step.decomposition.frame);
    const ComplexMatrix vdot =
        path.element_rate_at(step.t, step.decomposition.frame, step.frame_velocity.overlaps);
    const ComplexMatrix omega = commutator(h[i], step.state.mat) * (v.adjoint() * vdot);
    omega_integrand[i] = omega.trace().real();
    const ComplexMatrix transformed = conjugate_by(v, step.state.mat);
    shift_integrand[i] = (trace_product(transformed, hdot[i]) -
                          trace_product(step.state.mat, hdot[i]))
                             .real();
  }
  GaugeDefectResult out;
  out.omega_integral = trapezoid(omega_integrand, traj.dt);
  out.work_shift = trapezoid(shift_integrand, traj.dt);
  return out;
}

MonteCarloEstimate group_averaged_work(const Trajectory& traj, int samples, RandomStream& rng) {
  require_trajectory(traj, "group_averaged_work");
  if (samples < 2) throw InvalidArgument("group_averaged_work: need at least 2 samples");
  const auto h = hamiltonian_series(traj);
  const auto hdot = hamiltonian_rate_series(traj, h);
  const std::size_t n = traj.size();

  // Everything sample-independent is hoisted: eigenframe coefficients and
  // the eigenframe Hamiltonian rate.
  std::vector<ComplexMatrix> coeff(n);
  std::vector<ComplexMatrix> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    coeff[i] = eigenframe_coefficients(traj.steps[i]);
    g[i] = conjugate_by_adjoint(traj.steps[i].decomposition.frame, hdot[i]);
  }
  GaugeStructure structure =
      GaugeStructure::from_decomposition(traj.steps.front().decomposition);

  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> integrand(n, 0.0);
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix b = assemble_block_diagonal(structure, sample_gauge_blocks(structure, rng));
    const ComplexMatrix bdag = b.adjoint();
    for (std::size_t i = 0; i < n; ++i)
      integrand[i] = trace_product(b * coeff[i] * bdag, g[i]).real();
    const double w = trapezoid(integrand, traj.dt);
    sum += w;
    sum_sq += w * w;
  }
  MonteCarloEstimate out;
  out.samples = samples;
  out.estimate = sum / samples;
  const double var = std::max(0.0, (sum_sq - sum * sum / samples) / (samples - 1));
  out.std_error = std::sqrt(var / samples);
  return out;
}

}  // namespace qthermo
