#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "ghz/errors.hpp"
#include "ghz/lattice.hpp"
#include "ghz/noise.hpp"

namespace {

// Small chain system shared by the ensemble tests: 3 atoms keeps every
// propagation cheap while exercising real interacting dynamics.
ghz::HamiltonianTerms chain3_terms() {
  ghz::LatticeSpec spec;
  spec.extents = {3};
  return ghz::build_hamiltonian(
      ghz::interaction_matrix(ghz::build_positions(spec), spec.c6_hz_m6));
}

ghz::PulseShape test_pulse() {
  ghz::PulseParams params;
  params.omega_knots = {800.0, 1200.0, 700.0};
  params.delta_knots = {-300.0, 150.0, 400.0};
  params.duration_us = 0.02;
  return ghz::spline_pulse(params);
}

ghz::EvolveSettings fast_settings() {
  ghz::EvolveSettings settings;
  settings.n_steps = 100;
  return settings;
}

}  // namespace

TEST_CASE("noise spec validation") {
  ghz::NoiseSpec spec;
  CHECK(spec.level == doctest::Approx(0.03));
  CHECK(spec.n_members == 30);
  spec.validate();

  ghz::NoiseSpec bad = spec;
  bad.level = -0.01;
  CHECK_THROWS_AS(bad.validate(), ghz::DomainError);
  bad = spec;
  bad.n_members = 0;
  CHECK_THROWS_AS(bad.validate(), ghz::DomainError);
}

TEST_CASE("noisy member scales both waveforms multiplicatively") {
  const ghz::PulseShape pulse = test_pulse();
  ghz::NoiseSpec spec;
  spec.level = 0.03;

  double eps_omega = 0.0, eps_delta = 0.0;
  ghz::Rng rng(42);
  const ghz::PulseShape noisy =
      ghz::noisy_member(pulse, spec, rng, &eps_omega, &eps_delta);

  CHECK(eps_omega != 0.0);
  CHECK(eps_delta != 0.0);
  CHECK(eps_omega != eps_delta);
  CHECK(noisy.duration() == pulse.duration());

  const double T = pulse.duration();
  for (double frac : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    const double t = frac * T;
    CHECK(noisy.omega(t) ==
          doctest::Approx((1.0 + eps_omega) * pulse.omega(t)).epsilon(1e-15));
    CHECK(noisy.delta(t) ==
          doctest::Approx((1.0 + eps_delta) * pulse.delta(t)).epsilon(1e-15));
  }

  // The factor is frozen in time: the ratio at T/2 equals the ratio at T/4.
  CHECK(noisy.omega(0.5 * T) / pulse.omega(0.5 * T) ==
        doctest::Approx(noisy.omega(0.25 * T) / pulse.omega(0.25 * T))
            .epsilon(1e-14));
}

TEST_CASE("noisy member draws vanish at level zero") {
  const ghz::PulseShape pulse = test_pulse();
  ghz::NoiseSpec spec;
  spec.level = 0.0;
  double eps_omega = 1.0, eps_delta = 1.0;
  ghz::Rng rng(7);
  const ghz::PulseShape noisy =
      ghz::noisy_member(pulse, spec, rng, &eps_omega, &eps_delta);
  CHECK(eps_omega == 0.0);
  CHECK(eps_delta == 0.0);
  const double T = pulse.duration();
  for (double frac : {0.2, 0.5, 0.8}) {
    CHECK(noisy.omega(frac * T) == pulse.omega(frac * T));
    CHECK(noisy.delta(frac * T) == pulse.delta(frac * T));
  }
}

TEST_CASE("empirical draw statistics match the configured level") {
  const ghz::PulseShape pulse = test_pulse();
  ghz::NoiseSpec spec;
  spec.level = 0.03;
  const int n = 100000;
  std::vector<double> eo(static_cast<std::size_t>(n)), ed(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    ghz::Rng rng(ghz::derive_seed(99, 4, static_cast<std::uint64_t>(m)));
    ghz::noisy_member(pulse, spec, rng, &eo[static_cast<std::size_t>(m)],
                      &ed[static_cast<std::size_t>(m)]);
  }
  double mean_o = 0.0, mean_d = 0.0;
  for (int m = 0; m < n; ++m) {
    mean_o += eo[static_cast<std::size_t>(m)];
    mean_d += ed[static_cast<std::size_t>(m)];
  }
  mean_o /= n;
  mean_d /= n;
  double var_o = 0.0, var_d = 0.0, cov = 0.0;
  for (int m = 0; m < n; ++m) {
    const double a = eo[static_cast<std::size_t>(m)] - mean_o;
    const double b = ed[static_cast<std::size_t>(m)] - mean_d;
    var_o += a * a;
    var_d += b * b;
    cov += a * b;
  }
  var_o /= n;
  var_d /= n;
  cov /= n;

  CHECK(std::abs(std::sqrt(var_o) - 0.03) <= 0.001);
  CHECK(std::abs(std::sqrt(var_d) - 0.03) <= 0.001);
  CHECK(std::abs(mean_o) <= 0.001);
  CHECK(std::abs(mean_d) <= 0.001);
  // Independence across the two channels.
  CHECK(std::abs(cov / std::sqrt(var_o * var_d)) < 0.05);

  // Independence across members: correlation of consecutive draws.
  double lag = 0.0;
  for (int m = 0; m + 1 < n; ++m)
    lag += (eo[static_cast<std::size_t>(m)] - mean_o) *
           (eo[static_cast<std::size_t>(m + 1)] - mean_o);
  lag /= (n - 1);
  CHECK(std::abs(lag / var_o) < 0.05);
}

TEST_CASE("ensemble at level zero reproduces the noiseless fidelity exactly") {
  const ghz::HamiltonianTerms terms = chain3_terms();
  const ghz::PulseShape pulse = test_pulse();
  const ghz::GhzTarget target = ghz::ghz_phi_target(3);
  const ghz::EvolveSettings settings = fast_settings();

  ghz::NoiseSpec spec;
  spec.level = 0.0;
  spec.n_members = 5;
  const ghz::EnsembleResult res =
      ghz::ensemble_fidelity(terms, pulse, target, spec, settings, 31);

  const ghz::StateVector initial = ghz::StateVector::all_down(3);
  const ghz::Trajectory traj = ghz::evolve(terms, pulse, settings, initial);
  ghz::StateVector final_state;
  final_state.n_qubits = 3;
  final_state.amp = traj.final_state();
  const double noiseless = ghz::fidelity(final_state, target);

  CHECK(res.mean_fidelity == noiseless);
  CHECK(res.variance == 0.0);
  REQUIRE(static_cast<int>(res.member_fidelities.size()) == 5);
  for (double f : res.member_fidelities) CHECK(f == noiseless);
  for (std::uint8_t flag : res.failed) CHECK(flag == 0);
}

TEST_CASE("ensemble fidelity never exceeds the mean member fidelity") {
  const ghz::HamiltonianTerms terms = chain3_terms();
  const ghz::PulseShape pulse = test_pulse();
  const ghz::GhzTarget target = ghz::ghz_phi_target(3);
  const ghz::EvolveSettings settings = fast_settings();

  ghz::NoiseSpec spec;
  spec.level = 0.05;
  spec.n_members = 12;
  const ghz::EnsembleResult res =
      ghz::ensemble_fidelity(terms, pulse, target, spec, settings, 404);

  double mean_member = 0.0;
  for (double f : res.member_fidelities) mean_member += f;
  mean_member /= static_cast<double>(res.member_fidelities.size());
  CHECK(res.mean_fidelity <= mean_member + 1e-12);
  CHECK(res.variance >= 0.0);
}

TEST_CASE("ensemble runs reproduce bitwise under a fixed seed") {
  const ghz::HamiltonianTerms terms = chain3_terms();
  const ghz::PulseShape pulse = test_pulse();
  const ghz::GhzTarget target = ghz::ghz_phi_target(3);
  const ghz::EvolveSettings settings = fast_settings();

  ghz::NoiseSpec spec;
  spec.level = 0.03;
  spec.n_members = 6;
  const ghz::EnsembleResult a =
      ghz::ensemble_fidelity(terms, pulse, target, spec, settings, 555);
  const ghz::EnsembleResult b =
      ghz::ensemble_fidelity(terms, pulse, target, spec, settings, 555);

  CHECK(a.mean_fidelity == b.mean_fidelity);
  CHECK(a.variance == b.variance);
  REQUIRE(a.member_fidelities.size() == b.member_fidelities.size());
  for (std::size_t i = 0; i < a.member_fidelities.size(); ++i) {
    CHECK(a.member_fidelities[i] == b.member_fidelities[i]);
    CHECK(a.epsilon_omega[i] == b.epsilon_omega[i]);
    CHECK(a.epsilon_delta[i] == b.epsilon_delta[i]);
  }

  const ghz::EnsembleResult c =
      ghz::ensemble_fidelity(terms, pulse, target, spec, settings, 556);
  CHECK(c.mean_fidelity != a.mean_fidelity);
}

TEST_CASE("a failing member scores zero and the run continues") {
  const ghz::HamiltonianTerms terms = chain3_terms();
  const ghz::GhzTarget target = ghz::ghz_phi_target(3);
  const ghz::EvolveSettings settings = fast_settings();
  const ghz::PulseShape base = test_pulse();

  // The first waveform evaluation throws once; only member 0's propagation
  // sees it, every later member evolves normally.
  auto fuse = std::make_shared<bool>(true);
  const ghz::PulseShape tripwire(
      [base, fuse](double t) {
        if (*fuse) {
          *fuse = false;
          throw ghz::PropagationError("injected failure");
        }
        return base.omega(t);
      },
      [base](double t) { return base.delta(t); }, base.duration());

  ghz::NoiseSpec spec;
  spec.level = 0.03;
  spec.n_members = 4;
  const ghz::EnsembleResult res =
      ghz::ensemble_fidelity(terms, tripwire, target, spec, settings, 808);

  REQUIRE(static_cast<int>(res.failed.size()) == 4);
  CHECK(res.failed[0] == 1);
  CHECK(res.member_fidelities[0] == 0.0);
  for (std::size_t m = 1; m < 4; ++m) {
    CHECK(res.failed[m] == 0);
    CHECK(res.member_fidelities[m] > 0.0);
  }

  // The failed member contributes nothing to the averaged entries while the
  // denominator stays the full ensemble size: recompute from the survivors.
  double sum_aa = 0.0, sum_bb = 0.0;
  std::complex<double> sum_ab(0.0, 0.0);
  const ghz::StateVector initial = ghz::StateVector::all_down(3);
  for (int m = 1; m < 4; ++m) {
    ghz::Rng rng(ghz::derive_seed(808, 4, static_cast<std::uint64_t>(m)));
    const ghz::PulseShape member_pulse = ghz::noisy_member(base, spec, rng);
    const ghz::Trajectory traj = ghz::evolve(terms, member_pulse, settings, initial);
    const std::complex<double> pa = traj.final_state()[static_cast<Eigen::Index>(
        target.alpha_index)];
    const std::complex<double> pb = traj.final_state()[static_cast<Eigen::Index>(
        target.beta_index)];
    sum_aa += std::norm(pa);
    sum_bb += std::norm(pb);
    sum_ab += pa * std::conj(pb);
  }
  const double expected = (sum_aa + sum_bb) / 8.0 + std::abs(sum_ab) / 4.0;
  CHECK(res.mean_fidelity == doctest::Approx(expected).epsilon(1e-14));
}
