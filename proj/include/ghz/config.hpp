#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ghz/dynamics.hpp"
#include "ghz/lattice.hpp"
#include "ghz/observables.hpp"

namespace ghz {

enum class TargetKind { phi, psi };

std::string target_name(TargetKind kind);

// Box bounds for the pulse search, expressed relative to the lattice scales:
// drive knots in [0, omega_max_factor * v0], detuning knots in
// (delta_center_factor +- delta_span_factor) * delta_star, where delta_star
// is the all-down/all-up crossing detuning.
struct SearchConfig {
  double omega_max_factor = 2.0;
  double delta_span_factor = 1.5;
  double delta_center_factor = 0.0;
};

struct BoConfig {
  int budget = 300;
  int n_init = 24;
  int fit_every = 5;
  int fit_restarts = 3;
};

struct NoiseConfig {
  double level = 0.03;
  int n_members = 30;
};

// Explicit waveform knots for commands that replay a fixed pulse instead of
// optimizing one.
struct PulseConfig {
  std::array<double, 3> omega_knots{};
  std::array<double, 3> delta_knots{};
};

struct QuenchConfig {
  double delta_factor = 1.0;  // detuning as a multiple of delta_star
  double ramp_start = 0.25;   // fraction of the duration
  double ramp_end = 0.75;
};

struct SpectrumConfig {
  int snapshots = 25;  // at most 100
};

struct EntropyConfig {
  // Empty: default to the single contiguous half partition {0..N/2-1}.
  std::vector<std::vector<int>> partitions;
};

struct LevelsConfig {
  int points = 101;
  double delta_min_factor = 0.0;  // grid endpoints as multiples of delta_star
  double delta_max_factor = 2.0;
};

struct RunConfig {
  LatticeSpec lattice;
  TargetKind target = TargetKind::phi;
  double duration_us = 0.0;
  EvolveSettings evolve;
  SearchConfig search;
  BoConfig bo;
  std::optional<NoiseConfig> noise;
  std::optional<PulseConfig> pulse;
  QuenchConfig quench;
  SpectrumConfig spectrum;
  EntropyConfig entropy;
  LevelsConfig levels;

  GhzTarget make_target() const;
  std::vector<std::vector<int>> effective_partitions() const;
  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Parses and validates a JSON run configuration. Unknown keys anywhere in the
// document are rejected; every diagnostic names the key (or the parse
// location) it refers to.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical serialization with every default filled in; keys are sorted, so
// two equivalent configs produce identical bytes.
std::string config_echo(const RunConfig& config);

// SHA-256 of the canonical echo.
std::string config_hash(const RunConfig& config);

}  // namespace ghz
