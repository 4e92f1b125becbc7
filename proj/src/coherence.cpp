#include "ghz/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "ghz/errors.hpp"

namespace ghz {

namespace {

constexpr double kHermTol = 1e-12;

std::complex<double> pair_coherence(const StateVector& state,
                                    const GhzTarget& target) {
  const auto a = state.amp[static_cast<Eigen::Index>(target.alpha_index)];
  const auto b = state.amp[static_cast<Eigen::Index>(target.beta_index)];
  return a * std::conj(b);
}

// 2x2 rotation exp(-i theta/2 (cos(phase) sx + sin(phase) sy)).
Eigen::Matrix2cd pair_rotation_matrix(double theta, double phase) {
  const std::complex<double> im(0.0, 1.0);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigen::Matrix2cd u;
  u(0, 0) = c;
  u(0, 1) = -im * std::exp(-im * phase) * s;
  u(1, 0) = -im * std::exp(im * phase) * s;
  u(1, 1) = c;
  return u;
}

}  // namespace

void ReducedGhzState::validate() const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw DomainError("reduced state: density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > kHermTol ||
      std::abs(rho.trace().imag()) > kHermTol)
    throw DomainError("reduced state: trace must be 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(rho);
  if (eig.eigenvalues().minCoeff() < -kHermTol)
    throw DomainError("reduced state: density matrix is not positive");
}

ReducedGhzState ReducedGhzState::from_state(const StateVector& state,
                                            const GhzTarget& target) {
  target.validate(state.n_qubits);
  const auto a = state.amp[static_cast<Eigen::Index>(target.alpha_index)];
  const auto b = state.amp[static_cast<Eigen::Index>(target.beta_index)];
  const double rest2 =
      std::max(0.0, state.amp.squaredNorm() - std::norm(a) - std::norm(b));
  Eigen::Vector3cd v;
  v << a, b, std::sqrt(rest2);
  ReducedGhzState reduced;
  reduced.rho = v * v.adjoint();
  return reduced;
}

BlochVector4 bloch_vector(const StateVector& state, const GhzTarget& target) {
  target.validate(state.n_qubits);
  const std::complex<double> coh = pair_coherence(state, target);
  BlochVector4 s;
  s.s_x = std::sqrt(2.0) * coh.real();
  s.s_y = std::sqrt(2.0) * coh.imag();
  s.s_alpha = std::norm(state.amp[static_cast<Eigen::Index>(target.alpha_index)]);
  s.s_beta = std::norm(state.amp[static_cast<Eigen::Index>(target.beta_index)]);
  return s;
}

BlochVector4 bloch_vector(const ReducedGhzState& state) {
  BlochVector4 s;
  s.s_x = std::sqrt(2.0) * state.rho(0, 1).real();
  s.s_y = std::sqrt(2.0) * state.rho(0, 1).imag();
  s.s_alpha = state.rho(0, 0).real();
  s.s_beta = state.rho(1, 1).real();
  return s;
}

Channel Channel::coupling(double theta, double phase) {
  Channel c;
  c.kind = Kind::coupling;
  c.theta = theta;
  c.phase = phase;
  return c;
}

Channel Channel::dephasing(double gamma) {
  Channel c;
  c.kind = Kind::dephasing;
  c.gamma = gamma;
  return c;
}

Channel Channel::decay(double gamma) {
  Channel c;
  c.kind = Kind::decay;
  c.gamma = gamma;
  return c;
}

Channel Channel::other_unitary(double phase) {
  Channel c;
  c.kind = Kind::other_unitary;
  c.phase = phase;
  return c;
}

void Channel::validate() const {
  if (kind == Kind::dephasing || kind == Kind::decay) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw DomainError("channel: gamma must lie in [0, 1]");
  }
  if (!std::isfinite(theta) || !std::isfinite(phase))
    throw DomainError("channel: rotation parameters must be finite");
}

ReducedGhzState apply_channel(const ReducedGhzState& state,
                              const Channel& channel) {
  channel.validate();
  ReducedGhzState out = state;
  switch (channel.kind) {
    case Channel::Kind::coupling: {
      Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
      u.topLeftCorner<2, 2>() = pair_rotation_matrix(channel.theta, channel.phase);
      out.rho = u * state.rho * u.adjoint();
      break;
    }
    case Channel::Kind::dephasing: {
      // Phase flip |beta> -> -|beta> with probability gamma/2: the pair
      // coherence shrinks by exactly (1 - gamma) while populations stay put.
      const double q = 0.5 * channel.gamma;
      Eigen::Matrix3cd flip = Eigen::Matrix3cd::Identity();
      flip(1, 1) = -1.0;
      out.rho = (1.0 - q) * state.rho + q * flip * state.rho * flip;
      break;
    }
    case Channel::Kind::decay: {
      const double keep = 1.0 - channel.gamma;
      const double leg = std::sqrt(keep);
      Eigen::Matrix3cd k0 = Eigen::Matrix3cd::Zero();
      k0(0, 0) = leg;
      k0(1, 1) = leg;
      k0(2, 2) = 1.0;
      Eigen::Matrix3cd k1 = Eigen::Matrix3cd::Zero();
      k1(2, 0) = std::sqrt(channel.gamma);
      Eigen::Matrix3cd k2 = Eigen::Matrix3cd::Zero();
      k2(2, 1) = std::sqrt(channel.gamma);
      out.rho = k0 * state.rho * k0.adjoint() + k1 * state.rho * k1.adjoint() +
                k2 * state.rho * k2.adjoint();
      break;
    }
    case Channel::Kind::other_unitary: {
      Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
      u(2, 2) = std::exp(std::complex<double>(0.0, channel.phase));
      out.rho = u * state.rho * u.adjoint();
      break;
    }
  }
  return out;
}

CoherenceBound coherence_lower_bound(double s_alpha_ti, double s_beta_ti,
                                     double s_alpha_tf, double s_beta_tf) {
  // Populations straight from normalized amplitudes can overshoot the unit
  // interval by rounding residue; absorb that, reject anything larger.
  auto checked = [](double p) {
    if (!(p >= -kHermTol && p <= 1.0 + kHermTol))
      throw DomainError("coherence bound: populations must lie in [0, 1]");
    return std::clamp(p, 0.0, 1.0);
  };
  s_alpha_ti = checked(s_alpha_ti);
  s_beta_ti = checked(s_beta_ti);
  s_alpha_tf = checked(s_alpha_tf);
  s_beta_tf = checked(s_beta_tf);
  // Summing each pair largest-first makes the result exactly invariant under
  // swapping the alpha and beta labels.
  auto sum_sq = [](double p, double q) {
    const double p2 = p * p;
    const double q2 = q * q;
    return std::max(p2, q2) + std::min(p2, q2);
  };
  const double raw =
      sum_sq(s_alpha_tf, s_beta_tf) - sum_sq(s_alpha_ti, s_beta_ti);
  CoherenceBound out;
  out.bound = raw > 0.0 ? raw : 0.0;
  out.coherence_min = std::sqrt(0.5 * out.bound);
  return out;
}

StateVector apply_pair_rotation(const StateVector& state, const GhzTarget& target,
                                double theta, double phase) {
  target.validate(state.n_qubits);
  const Eigen::Matrix2cd u = pair_rotation_matrix(theta, phase);
  StateVector out = state;
  const auto ia = static_cast<Eigen::Index>(target.alpha_index);
  const auto ib = static_cast<Eigen::Index>(target.beta_index);
  const std::complex<double> a = state.amp[ia];
  const std::complex<double> b = state.amp[ib];
  out.amp[ia] = u(0, 0) * a + u(0, 1) * b;
  out.amp[ib] = u(1, 0) * a + u(1, 1) * b;
  return out;
}

RamseyResult ramsey_bound_from_state(const StateVector& psi_ti,
                                     const GhzTarget& target, double theta,
                                     double phase) {
  RamseyResult out;
  out.at_ti = bloch_vector(psi_ti, target);
  const StateVector psi_tf = apply_pair_rotation(psi_ti, target, theta, phase);
  out.at_tf = bloch_vector(psi_tf, target);
  const CoherenceBound cb = coherence_lower_bound(
      out.at_ti.s_alpha, out.at_ti.s_beta, out.at_tf.s_alpha, out.at_tf.s_beta);
  out.bound = cb.bound;
  out.coherence_min = cb.coherence_min;
  out.true_coherence = std::abs(pair_coherence(psi_ti, target));
  return out;
}

RamseyResult ramsey_bound_experiment(const HamiltonianTerms& terms,
                                     const PulseShape& pulse,
                                     const GhzTarget& target, double theta,
                                     double phase,
                                     const EvolveSettings& settings) {
  const StateVector initial = StateVector::all_down(terms.n_qubits);
  const Trajectory traj = evolve(terms, pulse, settings, initial);
  StateVector psi_ti;
  psi_ti.n_qubits = terms.n_qubits;
  psi_ti.amp = traj.final_state();
  return ramsey_bound_from_state(psi_ti, target, theta, phase);
}

}  // namespace ghz
