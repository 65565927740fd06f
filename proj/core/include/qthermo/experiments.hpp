#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qthermo/dynamics.hpp"
#include "qthermo/matrix.hpp"
#include "qthermo/state.hpp"

namespace qthermo {

enum class ExperimentKind { Dephasing, Gad, Driven, GaugeCheck, Tpm, Custom };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Named scalar drive: constant -> amplitude, linear -> offset + amplitude*t,
/// cosine -> offset + amplitude*cos(frequency*t).
struct DriveFunction {
  enum class Type { Constant, Linear, Cosine };
  Type type = Type::Constant;
  double amplitude = 1.0;
  double frequency = 1.0;
  double offset = 0.0;

  double value(double t) const;
  double derivative(double t) const;
};

struct InitialStateSpec {
  enum class Kind { Ground, Excited, Plus, MaximallyMixed, Explicit };
  Kind kind = Kind::Ground;
  ComplexMatrix explicit_matrix;

  /// Resolve against a Hamiltonian: ground/excited are the extremal
  /// eigenvectors of H(0).
  DensityMatrix build(const TimeDependentHamiltonian& h) const;
};

struct DissipatorSpec {
  enum class Type { Dephasing, GeneralizedAmplitudeDamping };
  Type type = Type::Dephasing;
  double rate = 0.0;
  double beta = 0.0;   // GAD only
  double omega = 0.0;  // GAD only; bath frequency, sets nbar
  Dissipator build() const;
};

/// Four-level Hamiltonian with multiplicities (2,2): linearly drifting
/// doubly-degenerate levels seen through a rotating frame exp(-i G t) with a
/// seeded random Hermitian generator G.
struct DegenerateSystemConfig {
  double level1 = -1.0;
  double level2 = 1.0;
  double rate1 = -0.8;
  double rate2 = 0.4;
  double generator_scale = 0.6;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Driven;
  std::string hamiltonian_family = "driven_qubit";  // or "scaled_sigma_z"
  DriveFunction drive;
  std::vector<DissipatorSpec> dissipators;
  InitialStateSpec initial_state;
  double tau = 0.0;
  double dt = 1e-3;
  int mc_samples = 2000;
  int gauge_paths = 50;
  int tpm_samples = 20;
  std::uint64_t seed = 1;
  DegenerateSystemConfig degenerate;

  static ExperimentConfig defaults_for(ExperimentKind kind);
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  /// Throws ConfigInvalid with a field-level message.
  void validate() const;

  TimeDependentHamiltonian build_hamiltonian() const;
  LindbladModel build_model() const;
};

struct DegenerateSystem {
  LindbladModel model;
  DensityMatrix initial_state;
};

DegenerateSystem make_degenerate_four_level(const DegenerateSystemConfig& cfg,
                                            std::uint64_t seed);

struct ExperimentReport {
  std::string summary_json;
  std::filesystem::path summary_path;
  std::filesystem::path csv_path;  // empty if the experiment writes no series
};

/// Run the configured experiment, writing timeseries.csv (or the TPM
/// distribution table) plus summary.json under out_dir. Identical config and
/// seed produce bit-identical files.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir);

/// Group-averaging study on the degenerate system: exact invariance of the
/// invariant work over sampled gauge paths, plus the Monte-Carlo group
/// average of the raw-work functional against the invariant work. Returns
/// the summary JSON text.
std::string gauge_check(const ExperimentConfig& cfg);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Nearest grid-aligned duration: round(tau/dt) steps of exactly dt. The
/// experiment runners snap their windows with this and record the effective
/// duration in the summary.
double snap_duration(double tau, double dt);

/// Shortest-width 17-significant-digit float formatting used for all CSV
/// output, so reruns are byte-identical.
std::string format_g17(double v);

}  // namespace qthermo
