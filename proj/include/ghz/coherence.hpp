#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "ghz/dynamics.hpp"
#include "ghz/observables.hpp"

namespace ghz {

// Generalized Bloch components of the {alpha, beta} pair:
//   s_x = Tr[rho Sigma_x], Sigma_x = (|a><b| + |b><a|) / sqrt(2)
//   s_y = Tr[rho Sigma_y], Sigma_y = i (|a><b| - |b><a|) / sqrt(2)
//   s_alpha = rho_aa, s_beta = rho_bb.
// Consequently s_x^2 + s_y^2 = 2 |rho_ab|^2.
struct BlochVector4 {
  double s_x = 0.0;
  double s_y = 0.0;
  double s_alpha = 0.0;
  double s_beta = 0.0;

  double norm() const {
    return std::sqrt(s_x * s_x + s_y * s_y + s_alpha * s_alpha +
                     s_beta * s_beta);
  }
};

// Minimal 3-level density matrix over {|alpha>, |beta>, other}, where "other"
// aggregates the whole orthogonal complement. Sufficient for every channel
// class the coherence-bound argument uses.
struct ReducedGhzState {
  Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();

  // Hermitian within 1e-12, trace 1 within 1e-12, eigenvalues >= -1e-12.
  void validate() const;  // throws DomainError

  // Projects a pure lattice state onto {alpha, beta, everything else}. The
  // aggregated component keeps its weight; its internal phase is absorbed
  // into the basis choice, so the reduced state is pure.
  static ReducedGhzState from_state(const StateVector& state,
                                    const GhzTarget& target);
};

BlochVector4 bloch_vector(const StateVector& state, const GhzTarget& target);
BlochVector4 bloch_vector(const ReducedGhzState& state);

// Channel classes of the monotonicity argument. gamma in [0, 1]; theta and
// phase are radians.
struct Channel {
  enum class Kind { coupling, dephasing, decay, other_unitary };
  Kind kind = Kind::coupling;
  double theta = 0.0;  // coupling rotation angle, or the other-block phase
  double phase = 0.0;  // azimuth of the coupling rotation axis
  double gamma = 0.0;  // dephasing / decay strength

  static Channel coupling(double theta, double phase = 0.0);
  static Channel dephasing(double gamma);
  static Channel decay(double gamma);
  static Channel other_unitary(double phase);

  void validate() const;  // throws DomainError
};

// Applies one channel:
//   coupling:      unitary exp(-i theta/2 (cos(phase) sx + sin(phase) sy))
//                  within span{|alpha>, |beta>}, identity elsewhere
//   dephasing:     rho_ab scaled by (1 - gamma) via a phase-flip Kraus pair
//   decay:         both populations leak to "other" with factor (1 - gamma),
//                  coherences pick up sqrt(1 - gamma) per decaying leg
//   other_unitary: phase on the aggregated complement, identity on the pair
// Every class leaves the Bloch-vector length non-increasing.
ReducedGhzState apply_channel(const ReducedGhzState& state, const Channel& channel);

// Eq.-style population bound: given pair populations at t_i and t_f connected
// by physical dynamics, the coherence at t_i obeys
//   2 |rho_ab(t_i)|^2 >= max(0, s_a(t_f)^2 + s_b(t_f)^2
//                               - s_a(t_i)^2 - s_b(t_i)^2).
struct CoherenceBound {
  double bound = 0.0;          // lower bound on 2 |rho_ab(t_i)|^2
  double coherence_min = 0.0;  // implied |rho_ab(t_i)| >= sqrt(bound / 2)
};
CoherenceBound coherence_lower_bound(double s_alpha_ti, double s_beta_ti,
                                     double s_alpha_tf, double s_beta_tf);

// The two-level coupling rotation applied to the {alpha, beta} amplitudes of
// a full lattice state; all other amplitudes are untouched.
StateVector apply_pair_rotation(const StateVector& state, const GhzTarget& target,
                                double theta, double phase);

struct RamseyResult {
  BlochVector4 at_ti;
  BlochVector4 at_tf;
  double bound = 0.0;           // lower bound on 2 |rho_ab(t_i)|^2
  double coherence_min = 0.0;   // sqrt(bound / 2)
  double true_coherence = 0.0;  // exact |rho_ab(t_i)| from the amplitudes
};

// Two-point Ramsey readout on an already-prepared state: record populations,
// rotate the pair, record populations again, form the bound.
RamseyResult ramsey_bound_from_state(const StateVector& psi_ti,
                                     const GhzTarget& target, double theta,
                                     double phase);

// Full experiment: evolve the all-down state under the pulse to t_i = T, then
// run the two-point readout.
RamseyResult ramsey_bound_experiment(const HamiltonianTerms& terms,
                                     const PulseShape& pulse,
                                     const GhzTarget& target, double theta,
                                     double phase, const EvolveSettings& settings);

}  // namespace ghz
