#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ghz/lattice.hpp"
#include "ghz/pulses.hpp"

namespace ghz {

inline constexpr int kMaxQubits = 16;

// Pure state over N qubits. Basis index b encodes spins with bit i = 1 iff
// atom i is up; bit 0 is atom 0 (least significant).
struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amp;

  static StateVector all_down(int n_qubits);
  static StateVector basis_state(int n_qubits, std::uint64_t b);
  double norm() const { return amp.norm(); }
};

// Diagonal structure of the spin Hamiltonian in rad/us. The full diagonal at
// detuning delta is d0 - delta * m.
struct HamiltonianTerms {
  int n_qubits = 0;
  Eigen::VectorXd d0;  // sum_i kappa_i s_i + sum_{i<j} V_ij s_i s_j, s = +-1
  Eigen::VectorXi m;   // total magnetization sum_i s_i per basis state
  std::int64_t dim() const { return std::int64_t{1} << n_qubits; }
};

// Converts the interaction table (Hz) to rad/us and tabulates d0 and m over
// all 2^N basis states. Throws CapacityError for N > kMaxQubits.
HamiltonianTerms build_hamiltonian(const InteractionTable& interactions);

// out = H in with H = diag(d0 - delta*m) + omega * sum_i sigma_x^i. The
// sigma_x part is applied as N single-bit-flip gathers; no matrix is stored.
void apply_hamiltonian(const HamiltonianTerms& terms, double omega, double delta,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out);
Eigen::VectorXcd apply_hamiltonian(const HamiltonianTerms& terms, double omega,
                                   double delta, const Eigen::VectorXcd& in);

struct EvolveSettings {
  int n_steps = 1000;        // piecewise-constant control segments
  int krylov_dim_max = 48;
  double krylov_tol = 1e-10; // error budget for the full evolution
  int record_stride = 0;     // 0: record t=0 and t=T only
  // Full Gram-Schmidt pass per Lanczos step. The plain three-term recurrence
  // is faster; the pass is kept as a safety switch for validation runs.
  bool reorthogonalize = false;
};

struct EvolveStats {
  std::int64_t matvecs = 0;
  std::int64_t substeps = 0;
  int max_krylov_dim = 0;
  int max_substeps_per_segment = 0;
};

struct Trajectory {
  int n_qubits = 0;
  std::vector<double> times_us;
  std::vector<Eigen::VectorXcd> states;
  EvolveStats stats;

  const Eigen::VectorXcd& final_state() const { return states.back(); }
};

// Propagates `initial` under the pulse by sampling (omega, delta) at segment
// midpoints and applying exp(-i H dt) per segment with an adaptive Lanczos
// approximation. Segments are split internally until the Krylov error
// estimate meets the per-time budget; failure to converge at the split limit
// throws PropagationError.
Trajectory evolve(const HamiltonianTerms& terms, const PulseShape& pulse,
                  const EvolveSettings& settings, const StateVector& initial);

}  // namespace ghz
