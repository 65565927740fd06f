#include "qthermo/dynamics.hpp"

#include <cmath>

#include "qthermo/eig.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

double mean_excitation(double beta, double omega) {
  const double x = beta * omega;
  if (!(x > 0.0)) throw NonPositiveArgument("mean_excitation: beta*omega must be positive");
  return 1.0 / std::expm1(x);
}

Dissipator Dissipator::dephasing(double gamma_dec) {
  if (gamma_dec < 0.0) throw InvalidArgument("dephasing rate must be >= 0");
  Dissipator d;
  d.kind = Kind::Dephasing;
  d.rate = gamma_dec;
  return d;
}

Dissipator Dissipator::generalized_amplitude_damping(double gamma_a, double nbar) {
  if (gamma_a < 0.0) throw InvalidArgument("amplitude damping rate must be >= 0");
  if (nbar < 0.0) throw InvalidArgument("mean excitation must be >= 0");
  Dissipator d;
  d.kind = Kind::GeneralizedAmplitudeDamping;
  d.rate = gamma_a;
  d.nbar = nbar;
  return d;
}

ComplexMatrix Dissipator::apply(const ComplexMatrix& rho) const {
  if (rho.dim() != 2) throw DimensionMismatch("dissipators are defined on qubits");
  switch (kind) {
    case Kind::Dephasing: {
      const ComplexMatrix sz = pauli_z();
      ComplexMatrix out = commutator(sz, commutator(sz, rho));
      out *= -0.5 * rate;
      return out;
    }
    case Kind::GeneralizedAmplitudeDamping: {
      // Lowering operator in the standard basis: excited (1,0) -> ground (0,1).
      const ComplexMatrix a(2, {0.0, 0.0, 1.0, 0.0});
      const ComplexMatrix adag = a.adjoint();
      ComplexMatrix down = a * rho * adag - 0.5 * anticommutator(adag * a, rho);
      ComplexMatrix up = adag * rho * a - 0.5 * anticommutator(a * adag, rho);
      down *= rate * (nbar + 1.0);
      up *= rate * nbar;
      return down + up;
    }
  }
  throw InvalidArgument("unknown dissipator kind");
}

ComplexMatrix rhs(const LindbladModel& model, const ComplexMatrix& rho, double t) {
  const ComplexMatrix h = model.hamiltonian(t);
  ComplexMatrix out = commutator(h, rho);
  out *= Complex{0.0, -1.0};
  for (const auto& d : model.dissipators) out += d.apply(rho);
  return out;
}

namespace {

ComplexMatrix rk4_step(const LindbladModel& model, const ComplexMatrix& rho, double t, double dt) {
  const ComplexMatrix k1 = rhs(model, rho, t);
  const ComplexMatrix k2 = rhs(model, rho + 0.5 * dt * k1, t + 0.5 * dt);
  const ComplexMatrix k3 = rhs(model, rho + 0.5 * dt * k2, t + 0.5 * dt);
  const ComplexMatrix k4 = rhs(model, rho + dt * k3, t + dt);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int grid_steps(double tau, double dt) {
  if (dt <= 0.0) throw InvalidArgument("evolve: dt must be positive");
  if (tau < 0.0) throw InvalidArgument("evolve: tau must be >= 0");
  const double ratio = tau / dt;
  const long long n = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("evolve: tau must be an integral number of steps dt");
  return static_cast<int>(n);
}

/// Second-order finite differences along a sampled series; one-sided at the
/// ends, first-order when only two points exist.
template <typename T>
std::vector<T> series_derivative(const std::vector<T>& f, double dt, const T& zero) {
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

}  // namespace

Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, double tau, double dt,
                  double degeneracy_tol) {
  rho0.validate();
  if (rho0.dim() != model.hamiltonian.dim())
    throw DimensionMismatch("evolve: state and Hamiltonian dimensions differ");
  const int n = grid_steps(tau, dt);

  Trajectory traj;
  traj.dt = dt;
  traj.degeneracy_tol = degeneracy_tol;
  traj.model = model;
  traj.steps.reserve(static_cast<std::size_t>(n) + 1);

  ComplexMatrix rho = rho0.mat;
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    if (i > 0) {
      rho = rk4_step(model, rho, (i - 1) * dt, dt);
      rho = rho.hermitized();
      rho *= 1.0 / rho.trace().real();
      const double lo = hermitian_eig(rho).eigenvalues.front();
      if (lo < -1e-6)
        throw StateInvariantViolated("evolve: eigenvalue " + std::to_string(lo) +
                                     " at t=" + std::to_string(t) + "; dt is too large");
    }
    TrajectoryStep step;
    step.t = t;
    step.state = DensityMatrix(rho);
    step.decomposition = model.hamiltonian.decompose(t, degeneracy_tol);
    if (i > 0) {
      const auto& prev = traj.steps.back().decomposition;
      if (prev.multiplicities != step.decomposition.multiplicities)
        throw DegeneracyChanged("evolve: multiplicity pattern changed at t=" + std::to_string(t));
      if (!model.hamiltonian.has_analytic_eigensystem())
        step.decomposition = smooth_frame(prev, std::move(step.decomposition));
    }
    traj.steps.push_back(std::move(step));
  }

  const std::size_t count = traj.steps.size();
  const bool analytic = model.hamiltonian.has_analytic_eigensystem();

  // Frame-velocity overlaps.
  if (analytic) {
    for (auto& step : traj.steps) {
      const AnalyticEigensystem sys = model.hamiltonian.analytic_eigensystem(step.t);
      step.frame_velocity = FrameVelocity{step.t, sys.overlaps};
    }
  } else {
    std::vector<ComplexMatrix> frames;
    frames.reserve(count);
    for (const auto& step : traj.steps) frames.push_back(step.decomposition.frame);
    const auto frame_rates = series_derivative(frames, dt, ComplexMatrix(rho0.dim()));
    for (std::size_t i = 0; i < count; ++i) {
      const ComplexMatrix raw = traj.steps[i].decomposition.frame.adjoint() * frame_rates[i];
      traj.steps[i].frame_velocity = FrameVelocity{traj.steps[i].t, clean_overlaps(raw)};
    }
  }

  // Eigenvalue rates: closed form when supplied, differences of the cluster
  // eigenvalue series otherwise.
  bool has_rates = false;
  if (analytic) {
    has_rates = true;
    for (auto& step : traj.steps) {
      const AnalyticEigensystem sys = model.hamiltonian.analytic_eigensystem(step.t);
      if (sys.eigenvalue_rates.empty()) {
        has_rates = false;
        break;
      }
      step.eigenvalue_rates = sys.eigenvalue_rates;
    }
  }
  if (!has_rates) {
    const std::size_t p = traj.steps.front().decomposition.eigenvalues.size();
    std::vector<std::vector<double>> series(count);
    for (std::size_t i = 0; i < count; ++i) series[i] = traj.steps[i].decomposition.eigenvalues;
    for (std::size_t k = 0; k < p; ++k) {
      std::vector<double> eps(count);
      for (std::size_t i = 0; i < count; ++i) eps[i] = series[i][k];
      const auto rates = series_derivative(eps, dt, 0.0);
      for (std::size_t i = 0; i < count; ++i) {
        if (traj.steps[i].eigenvalue_rates.size() != p) traj.steps[i].eigenvalue_rates.assign(p, 0.0);
        traj.steps[i].eigenvalue_rates[k] = rates[i];
      }
    }
  }
  return traj;
}

CoefficientTrajectory evolve_coefficients(const std::function<double(double)>& gamma,
                                          const std::function<double(double)>& gamma_dot,
                                          const ComplexMatrix& c0, double tau, double dt) {
  if (c0.dim() != 2) throw DimensionMismatch("evolve_coefficients: coefficients are 2x2");
  if (c0.hermiticity_error() > 1e-10)
    throw InvalidState("evolve_coefficients: c0 must be Hermitian");
  if (std::abs(c0.trace() - Complex{1.0, 0.0}) > 1e-10)
    throw InvalidState("evolve_coefficients: c0 must have unit trace");
  const int n = grid_steps(tau, dt);

  auto deriv = [&gamma, &gamma_dot](const ComplexMatrix& c, double t) {
    const double g = gamma(t);
    const double gd = gamma_dot(t);
    const double lam2 = 1.0 + g * g;
    const double lam = std::sqrt(lam2);
    const double k = gd / (2.0 * lam2);
    ComplexMatrix out(2);
    out(0, 0) = -k * (c(0, 1) + c(1, 0));
    out(0, 1) = Complex{0.0, 2.0 * lam} * c(0, 1) + k * (c(0, 0) - c(1, 1));
    out(1, 0) = Complex{0.0, -2.0 * lam} * c(1, 0) - k * (c(1, 1) - c(0, 0));
    out(1, 1) = k * (c(0, 1) + c(1, 0));
    return out;
  };

  CoefficientTrajectory traj;
  traj.dt = dt;
  traj.times.reserve(static_cast<std::size_t>(n) + 1);
  traj.coefficients.reserve(static_cast<std::size_t>(n) + 1);
  ComplexMatrix c = c0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    if (i > 0) {
      const double t0 = (i - 1) * dt;
      const ComplexMatrix k1 = deriv(c, t0);
      const ComplexMatrix k2 = deriv(c + 0.5 * dt * k1, t0 + 0.5 * dt);
      const ComplexMatrix k3 = deriv(c + 0.5 * dt * k2, t0 + 0.5 * dt);
      const ComplexMatrix k4 = deriv(c + dt * k3, t0 + dt);
      c += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    traj.times.push_back(t);
    traj.coefficients.push_back(c);
  }
  return traj;
}

}  // namespace qthermo
