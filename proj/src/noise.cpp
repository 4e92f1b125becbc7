#include "ghz/noise.hpp"

#include <cmath>
#include <complex>

#include "ghz/errors.hpp"

namespace ghz {

void NoiseSpec::validate() const {
  if (!(level >= 0.0) || !std::isfinite(level))
    throw DomainError("noise: level must be a finite value >= 0");
  if (n_members < 1) throw DomainError("noise: need at least 1 ensemble member");
}

PulseShape noisy_member(const PulseShape& pulse, const NoiseSpec& spec,
                        Rng& member_rng, double* eps_omega_out,
                        double* eps_delta_out) {
  spec.validate();
  const double eps_omega = spec.level * member_rng.normal();
  const double eps_delta = spec.level * member_rng.normal();
  if (eps_omega_out) *eps_omega_out = eps_omega;
  if (eps_delta_out) *eps_delta_out = eps_delta;
  const double omega_scale = 1.0 + eps_omega;
  const double delta_scale = 1.0 + eps_delta;
  return PulseShape(
      [pulse, omega_scale](double t) { return omega_scale * pulse.omega(t); },
      [pulse, delta_scale](double t) { return delta_scale * pulse.delta(t); },
      pulse.duration());
}

EnsembleResult ensemble_fidelity(const HamiltonianTerms& terms,
                                 const PulseShape& pulse, const GhzTarget& target,
                                 const NoiseSpec& spec,
                                 const EvolveSettings& settings,
                                 std::uint64_t seed) {
  spec.validate();
  target.validate(terms.n_qubits);
  const StateVector initial = StateVector::all_down(terms.n_qubits);

  EnsembleResult out;
  out.member_fidelities.reserve(static_cast<std::size_t>(spec.n_members));
  out.epsilon_omega.reserve(static_cast<std::size_t>(spec.n_members));
  out.epsilon_delta.reserve(static_cast<std::size_t>(spec.n_members));
  out.failed.reserve(static_cast<std::size_t>(spec.n_members));

  if (spec.level == 0.0) {
    // Degenerate ensemble: every member is the noiseless pulse, so one
    // propagation serves all of them and the mean is exact by construction.
    const Trajectory traj = evolve(terms, pulse, settings, initial);
    StateVector final_state;
    final_state.n_qubits = terms.n_qubits;
    final_state.amp = traj.final_state();
    const double f = fidelity(final_state, target);
    out.mean_fidelity = f;
    out.variance = 0.0;
    for (int m = 0; m < spec.n_members; ++m) {
      out.member_fidelities.push_back(f);
      out.epsilon_omega.push_back(0.0);
      out.epsilon_delta.push_back(0.0);
      out.failed.push_back(0);
    }
    return out;
  }

  double sum_aa = 0.0, sum_bb = 0.0;
  std::complex<double> sum_ab(0.0, 0.0);
  for (int m = 0; m < spec.n_members; ++m) {
    Rng member_rng(derive_seed(seed, 4, static_cast<std::uint64_t>(m)));
    double eps_omega = 0.0, eps_delta = 0.0;
    const PulseShape member_pulse =
        noisy_member(pulse, spec, member_rng, &eps_omega, &eps_delta);
    out.epsilon_omega.push_back(eps_omega);
    out.epsilon_delta.push_back(eps_delta);
    try {
      const Trajectory traj = evolve(terms, member_pulse, settings, initial);
      const Eigen::VectorXcd& psi = traj.final_state();
      const std::complex<double> pa = psi[static_cast<Eigen::Index>(target.alpha_index)];
      const std::complex<double> pb = psi[static_cast<Eigen::Index>(target.beta_index)];
      sum_aa += std::norm(pa);
      sum_bb += std::norm(pb);
      sum_ab += pa * std::conj(pb);
      StateVector final_state;
      final_state.n_qubits = terms.n_qubits;
      final_state.amp = psi;
      out.member_fidelities.push_back(fidelity(final_state, target));
      out.failed.push_back(0);
    } catch (const Error&) {
      out.member_fidelities.push_back(0.0);
      out.failed.push_back(1);
    }
  }

  const double n = static_cast<double>(spec.n_members);
  out.mean_fidelity = (sum_aa + sum_bb) / (2.0 * n) + std::abs(sum_ab) / n;

  double mu = 0.0;
  for (double f : out.member_fidelities) mu += f;
  mu /= n;
  double var = 0.0;
  for (double f : out.member_fidelities) var += (f - mu) * (f - mu);
  out.variance = var / n;
  return out;
}

}  // namespace ghz
