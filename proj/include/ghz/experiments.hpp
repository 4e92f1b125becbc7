#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ghz/bayesopt.hpp"
#include "ghz/coherence.hpp"
#include "ghz/config.hpp"
#include "ghz/dynamics.hpp"
#include "ghz/noise.hpp"
#include "ghz/observables.hpp"
#include "ghz/pulses.hpp"

namespace ghz {

// Scaffolding shared by every scenario: the Hamiltonian, the target pair, the
// lattice scales and the pulse search box derived from them.
struct Workspace {
  HamiltonianTerms terms;
  GhzTarget target;
  double v0_rad_per_us = 0.0;  // largest pair coupling
  double delta_star = 0.0;     // all-down / all-up crossing detuning
  SearchSpace space;
};

Workspace make_workspace(const RunConfig& config);

// [w1 w2 w3 d1 d2 d3] -> spline knots plus duration.
PulseParams params_from_vector(const Eigen::VectorXd& raw, double duration_us);

// The explicit pulse section; throws ConfigError when the config has none.
PulseShape pulse_from_config(const RunConfig& config);

// Every report writes into out_dir: config.json (canonical echo), its own
// CSVs, summary.json and manifest.json. CSV bytes depend only on (config,
// seed); the manifest carries the wall-clock timestamps.

struct OptimizeOutcome {
  OptimizationTrace trace;
  PulseParams best_params;
  double best_value = 0.0;          // objective value (ensemble mean when noisy)
  double noiseless_fidelity = 0.0;  // plain fidelity of the best pulse
  Trajectory trajectory;            // re-simulation of the best pulse
};

// Runs the Bayesian search for the configured target, then re-simulates the
// best pulse recording F(t) and the three GHZ matrix elements. An interrupted
// run that left trace.csv.partial (or a finished trace.csv) behind is resumed
// from the recorded rows and produces the same bytes as an uninterrupted run.
OptimizeOutcome optimize_ghz(const RunConfig& config, const std::string& out_dir,
                             std::uint64_t seed);

struct QuenchRow {
  double g = 0.0;
  double omega_rad_per_us = 0.0;
  double delta_rad_per_us = 0.0;
  double fidelity = 0.0;
};

struct QuenchOutcome {
  std::vector<QuenchRow> rows;
  int argmax = 0;
};

// Fidelity of the quench drive versus the quench strength g; Omega1 = Omega2
// = g * v0 and the detuning is held at quench.delta_factor * delta_star.
QuenchOutcome quench_scan(const RunConfig& config,
                          const std::vector<double>& g_values,
                          const std::string& out_dir, std::uint64_t seed);

std::vector<double> default_g_values();  // 0.2 to 2.0 in steps of 0.1

struct SpectrumOutcome {
  std::vector<SpectrumSnapshot> snapshots;
};

// Instantaneous eigensystem along the evolution under the configured pulse,
// subsampled to at most spectrum.snapshots times.
SpectrumOutcome spectrum_report(const RunConfig& config, const std::string& out_dir,
                                std::uint64_t seed);

struct EntropyOutcome {
  std::vector<double> times_us;
  std::vector<std::vector<int>> partitions;
  Eigen::MatrixXd entropies;    // times x partitions, bits
  std::vector<double> slopes;   // least squares over [0.1 T, 0.4 T]
  std::vector<double> finals;   // entropy at t = T
};

EntropyOutcome entropy_report(const RunConfig& config, const std::string& out_dir,
                              std::uint64_t seed);

struct CrossingInfo {
  bool exists = false;
  double delta_star = 0.0;
};

struct LevelOutcome {
  LevelDiagram diagram;
  std::vector<std::uint64_t> written;  // basis indices persisted to levels.csv
  CrossingInfo phi;
  CrossingInfo psi;
};

// Zero-drive level lines over a detuning grid plus the crossing markers of
// the two component pairs. Beyond 10 atoms only the lines within two spin
// flips of a component state are written out.
LevelOutcome level_diagram_report(const RunConfig& config, const std::string& out_dir,
                                  std::uint64_t seed);

struct EvolveOutcome {
  Trajectory trajectory;
  double final_fidelity = 0.0;
};

EvolveOutcome evolve_report(const RunConfig& config, const std::string& out_dir,
                            std::uint64_t seed);

struct NoiseEvalOutcome {
  EnsembleResult ensemble;
  double noiseless_fidelity = 0.0;
};

NoiseEvalOutcome noise_eval(const RunConfig& config, const std::string& out_dir,
                            std::uint64_t seed);

struct CoherenceTrial {
  int trial = 0;
  double theta = 0.0;
  double phase = 0.0;
  RamseyResult result;
};

struct CoherenceOutcome {
  std::vector<CoherenceTrial> trials;
  // max over trials of bound - 2 |rho_ab|^2; nonpositive when the bound holds.
  double max_violation = 0.0;
};

// Random pulses and readout angles; each trial records the two-point Ramsey
// bound next to the exact coherence it is bounding.
CoherenceOutcome coherence_bound_report(const RunConfig& config, int n_trials,
                                        const std::string& out_dir,
                                        std::uint64_t seed);

}  // namespace ghz
