// Timing probe for the propagator across the lattice sizes and pulse regimes
// the optimizer will visit. Prints wall time and Krylov statistics so budget
// choices (iterations, n_steps) can be grounded in measurements.
#include <chrono>
#include <cstdio>
#include <string>

#include "ghz/dynamics.hpp"
#include "ghz/lattice.hpp"
#include "ghz/pulses.hpp"

using namespace ghz;

namespace {

struct Case {
  std::string name;
  std::vector<int> extents;
  double duration_us;
  double omega_scale;  // knots as multiples of v0
  int n_steps;
};

void run_case(const Case& c) {
  LatticeSpec spec;
  spec.extents = c.extents;
  auto table = interaction_matrix(build_positions(spec), spec.c6_hz_m6);
  auto terms = build_hamiltonian(table);

  const double v0 = table.v0 * hz_to_rad_per_us;
  const double kbar = table.kappa.mean() * hz_to_rad_per_us;

  PulseParams p;
  p.omega_knots = {0.6 * c.omega_scale * v0, c.omega_scale * v0,
                   0.6 * c.omega_scale * v0};
  p.delta_knots = {0.4 * kbar, 1.0 * kbar, 1.6 * kbar};
  p.duration_us = c.duration_us;
  auto pulse = spline_pulse(p);

  EvolveSettings settings;
  settings.n_steps = c.n_steps;

  auto t0 = std::chrono::steady_clock::now();
  auto traj = evolve(terms, pulse, settings, StateVector::all_down(terms.n_qubits));
  auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();

  const double norm = traj.final_state().norm();
  std::printf(
      "%-22s N=%2d T=%.2fus steps=%d  %7.2fs  matvecs=%ld substeps=%ld "
      "max_m=%d max_sub=%d |psi|=%.12f\n",
      c.name.c_str(), terms.n_qubits, c.duration_us, c.n_steps, secs,
      static_cast<long>(traj.stats.matvecs), static_cast<long>(traj.stats.substeps),
      traj.stats.max_krylov_dim, traj.stats.max_substeps_per_segment, norm);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  const std::vector<Case> cases = {
      {"phi_n8", {2, 4}, 0.1, 1.0, 1000},
      {"phi_n8_s500", {2, 4}, 0.1, 1.0, 500},
      {"phi_n8_s2000", {2, 4}, 0.1, 1.0, 2000},
      {"phi_n12", {3, 4}, 0.1, 1.0, 1000},
      {"psi_n8", {2, 4}, 1.0, 0.25, 1000},
      {"psi_n12", {3, 4}, 1.0, 0.25, 1000},
      {"phi_n12_3d", {2, 2, 3}, 0.1, 1.0, 1000},
  };
  for (const auto& c : cases) {
    if (which == "all" || which == c.name) run_case(c);
  }
  return 0;
}
