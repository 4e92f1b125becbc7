#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ghz/dynamics.hpp"
#include "ghz/observables.hpp"
#include "ghz/pulses.hpp"
#include "ghz/rng.hpp"

namespace ghz {

// Quasi-static control-field fluctuations: each ensemble member scales the
// whole Rabi waveform by (1 + eps_omega) and the whole detuning waveform by
// (1 + eps_delta), with both factors frozen for that member's entire run.
struct NoiseSpec {
  double level = 0.03;  // relative standard deviation of the two draws
  int n_members = 30;

  void validate() const;  // throws DomainError
};

// Draws (eps_omega, eps_delta) from member_rng and returns the scaled pulse.
// The optional out-pointers report the draws so callers can persist them.
PulseShape noisy_member(const PulseShape& pulse, const NoiseSpec& spec,
                        Rng& member_rng, double* eps_omega_out = nullptr,
                        double* eps_delta_out = nullptr);

struct EnsembleResult {
  // Fidelity of the ensemble-averaged state: populations averaged first, the
  // coherence averaged before taking its modulus.
  double mean_fidelity = 0.0;
  // Population variance of the member fidelities (the spread band).
  double variance = 0.0;
  std::vector<double> member_fidelities;
  std::vector<double> epsilon_omega;
  std::vector<double> epsilon_delta;
  std::vector<std::uint8_t> failed;  // 1 where propagation failed (scored 0)
};

// Evolves every member's noisy pulse from the all-down state and assembles
// the averaged-state fidelity. Member seeds derive from (seed, member index),
// so results are independent of evaluation order. A member whose propagation
// fails contributes zero to the averaged entries, scores 0, and is flagged;
// the run continues.
EnsembleResult ensemble_fidelity(const HamiltonianTerms& terms,
                                 const PulseShape& pulse, const GhzTarget& target,
                                 const NoiseSpec& spec,
                                 const EvolveSettings& settings,
                                 std::uint64_t seed);

}  // namespace ghz
