#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ghz/dynamics.hpp"
#include "ghz/lattice.hpp"

namespace ghz {

// The two product components of the GHZ superposition, by basis index.
struct GhzTarget {
  std::uint64_t alpha_index = 0;
  std::uint64_t beta_index = 0;

  void validate(int n_qubits) const;  // throws DomainError
};

// All-down / all-up component pair.
GhzTarget ghz_phi_target(int n_qubits);
// Checkerboard / inverted-checkerboard component pair for the lattice.
GhzTarget ghz_psi_target(const LatticeSpec& spec);

// F = (|psi_a|^2 + |psi_b|^2)/2 + |psi_a^* psi_b|, the pure-state form of the
// phase-maximized GHZ fidelity.
double fidelity(const StateVector& state, const GhzTarget& target);

// Dense instantaneous eigensystem of H(omega, delta) plus per-eigenstate
// magnetization and population of the supplied state.
struct SpectrumSnapshot {
  double time_us = 0.0;
  Eigen::VectorXd eigenvalues;     // ascending, rad/us
  Eigen::VectorXd magnetizations;  // <e_k| sum_i sigma_z^i |e_k>
  Eigen::VectorXd populations;     // |<e_k|psi>|^2
};

inline constexpr int kMaxDenseQubits = 12;

// Throws CapacityError for N > kMaxDenseQubits.
SpectrumSnapshot instantaneous_spectrum(const HamiltonianTerms& terms, double omega,
                                        double delta, const StateVector& state,
                                        double time_us = 0.0);

// E_b(delta) = d0(b) - delta*m(b): every zero-drive level is a straight line.
struct LevelLine {
  std::uint64_t basis_index = 0;
  double slope = 0.0;      // -m(b)
  double intercept = 0.0;  // d0(b)
};

struct LevelDiagram {
  std::vector<double> delta_grid;
  std::vector<LevelLine> lines;
  Eigen::MatrixXd energies;  // lines x grid points
};

LevelDiagram level_diagram(const HamiltonianTerms& terms,
                           const std::vector<double>& delta_grid);

// Detuning where the levels of b1 and b2 intersect. Throws DomainError when
// the lines are parallel (equal magnetization).
double find_crossing(const HamiltonianTerms& terms, std::uint64_t b1,
                     std::uint64_t b2);

// Von Neumann entropy (bits) of the reduced state on `partition` (atom
// indices to keep). Throws PartitionError on empty/full/invalid partitions.
double entanglement_entropy(const StateVector& state,
                            const std::vector<int>& partition);

}  // namespace ghz
