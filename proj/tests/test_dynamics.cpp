#include <cmath>
#include <complex>

#include "doctest.h"
#include "ghz/dynamics.hpp"
#include "ghz/errors.hpp"
#include "ghz/lattice.hpp"
#include "ghz/pulses.hpp"
#include "ghz/rng.hpp"
#include "oracles.hpp"

using namespace ghz;
using cd = std::complex<double>;

namespace {

InteractionTable table_for(std::vector<int> extents) {
  LatticeSpec spec;
  spec.extents = std::move(extents);
  return interaction_matrix(build_positions(spec), spec.c6_hz_m6);
}

Eigen::VectorXcd random_state(int n_qubits, Rng& rng) {
  const std::int64_t dim = std::int64_t{1} << n_qubits;
  Eigen::VectorXcd psi(dim);
  for (std::int64_t i = 0; i < dim; ++i) psi[i] = cd(rng.normal(), rng.normal());
  psi /= psi.norm();
  return psi;
}

PulseShape constant_pulse(double omega, double delta, double duration) {
  return PulseShape([omega](double) { return omega; },
                    [delta](double) { return delta; }, duration);
}

}  // namespace

TEST_CASE("diagonal decomposition for a single free spin") {
  InteractionTable table;
  table.n = 1;
  table.v = Eigen::MatrixXd::Zero(1, 1);
  table.kappa = Eigen::VectorXd::Zero(1);
  auto terms = build_hamiltonian(table);
  CHECK(terms.d0[0] == 0.0);
  CHECK(terms.d0[1] == 0.0);
  CHECK(terms.m[0] == -1);
  CHECK(terms.m[1] == 1);
}

TEST_CASE("diagonal decomposition for a coupled pair") {
  auto table = table_for({2});
  auto terms = build_hamiltonian(table);
  const double v_rad = table.v(0, 1) * hz_to_rad_per_us;
  CHECK(terms.d0[0b00] == doctest::Approx(-v_rad).epsilon(1e-14));
  CHECK(terms.d0[0b01] == doctest::Approx(-v_rad).epsilon(1e-14));
  CHECK(terms.d0[0b10] == doctest::Approx(-v_rad).epsilon(1e-14));
  CHECK(terms.d0[0b11] == doctest::Approx(3.0 * v_rad).epsilon(1e-14));
  CHECK(terms.m[0b00] == -2);
  CHECK(terms.m[0b01] == 0);
  CHECK(terms.m[0b11] == 2);
}

TEST_CASE("magnetization index of the extremal states") {
  auto terms = build_hamiltonian(table_for({2, 3}));
  const std::int64_t dim = terms.dim();
  CHECK(terms.m[0] == -6);
  CHECK(terms.m[dim - 1] == 6);
}

TEST_CASE("capacity guard") {
  InteractionTable table;
  table.n = 17;
  table.v = Eigen::MatrixXd::Zero(17, 17);
  table.kappa = Eigen::VectorXd::Zero(17);
  CHECK_THROWS_AS(build_hamiltonian(table), CapacityError);
}

TEST_CASE("matvec with zero drive is a diagonal scaling") {
  auto terms = build_hamiltonian(table_for({2, 2}));
  Rng rng(5);
  const auto psi = random_state(4, rng);
  const auto out = apply_hamiltonian(terms, 0.0, 0.7, psi);
  for (std::int64_t b = 0; b < terms.dim(); ++b) {
    const double diag = terms.d0[b] - 0.7 * terms.m[b];
    CHECK(std::abs(out[b] - diag * psi[b]) < 1e-12 * std::abs(diag * psi[b]) + 1e-15);
  }
}

TEST_CASE("matvec flips a lone spin") {
  InteractionTable table;
  table.n = 1;
  table.v = Eigen::MatrixXd::Zero(1, 1);
  table.kappa = Eigen::VectorXd::Zero(1);
  auto terms = build_hamiltonian(table);
  Eigen::VectorXcd down(2);
  down << 1.0, 0.0;
  const auto out = apply_hamiltonian(terms, 1.0, 0.0, down);
  CHECK(out[0] == cd(0.0, 0.0));
  CHECK(out[1] == cd(1.0, 0.0));
}

TEST_CASE("matvec matches the dense operator") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 5;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = rng.uniform(0.0, 3.0);
    InteractionTable table;
    table.n = n;
    table.v = v / hz_to_rad_per_us;  // so the built terms land on v itself
    table.kappa = table.v.rowwise().sum();
    auto terms = build_hamiltonian(table);
    const double omega = rng.uniform(0.0, 2.0);
    const double delta = rng.uniform(-2.0, 2.0);
    const auto psi = random_state(n, rng);
    const auto fast = apply_hamiltonian(terms, omega, delta, psi);
    const auto dense =
        oracle::dense_hamiltonian(v, v.rowwise().sum(), omega, delta);
    const Eigen::VectorXcd ref = dense * psi;
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-12 * dense.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("zero-drive evolution only rotates phases") {
  auto table = table_for({3});
  auto terms = build_hamiltonian(table);
  Rng rng(29);
  StateVector init;
  init.n_qubits = 3;
  init.amp = random_state(3, rng);
  EvolveSettings settings;
  settings.n_steps = 50;
  const double T = 0.01;
  auto traj = evolve(terms, constant_pulse(0.0, 1234.5, T), settings, init);
  const auto fin = traj.final_state();
  for (std::int64_t b = 0; b < terms.dim(); ++b) {
    CHECK(std::abs(fin[b]) == doctest::Approx(std::abs(init.amp[b])).epsilon(1e-9));
    const double phase = -(terms.d0[b] - 1234.5 * terms.m[b]) * T;
    const cd expected = init.amp[b] * std::polar(1.0, phase);
    CHECK(std::abs(fin[b] - expected) < 1e-8);
  }
}

TEST_CASE("resonant Rabi flopping of a free spin") {
  InteractionTable table;
  table.n = 1;
  table.v = Eigen::MatrixXd::Zero(1, 1);
  table.kappa = Eigen::VectorXd::Zero(1);
  auto terms = build_hamiltonian(table);
  const double omega = 3.0;
  EvolveSettings settings;
  settings.n_steps = 100;
  settings.record_stride = 10;
  auto traj = evolve(terms, constant_pulse(omega, 0.0, 1.0), settings,
                     StateVector::all_down(1));
  REQUIRE(traj.times_us.size() == traj.states.size());
  for (std::size_t k = 0; k < traj.times_us.size(); ++k) {
    const double t = traj.times_us[k];
    const double p_up = std::norm(traj.states[k][1]);
    CHECK(p_up == doctest::Approx(std::sin(omega * t) * std::sin(omega * t))
                      .epsilon(1e-8)
                      .scale(1.0));
  }
}

TEST_CASE("Krylov propagation matches dense evolution on random pulses") {
  Rng rng(101);
  for (int trial = 0; trial < 3; ++trial) {
    auto table = table_for({2, 2});
    auto terms = build_hamiltonian(table);
    const double v0_rad = table.v0 * hz_to_rad_per_us;
    PulseParams p;
    p.omega_knots = {rng.uniform(0.0, v0_rad), rng.uniform(0.0, v0_rad),
                     rng.uniform(0.0, v0_rad)};
    p.delta_knots = {rng.uniform(-v0_rad, v0_rad), rng.uniform(-v0_rad, v0_rad),
                     rng.uniform(-v0_rad, v0_rad)};
    p.duration_us = 0.02;
    auto pulse = spline_pulse(p);

    EvolveSettings settings;
    settings.n_steps = 64;
    auto traj = evolve(terms, pulse, settings, StateVector::all_down(4));

    // Same piecewise-constant discretization, propagated densely.
    Eigen::MatrixXd v_rad = table.v * hz_to_rad_per_us;
    Eigen::VectorXd kappa_rad = table.kappa * hz_to_rad_per_us;
    Eigen::VectorXcd psi = StateVector::all_down(4).amp;
    const double dt = p.duration_us / settings.n_steps;
    for (int s = 0; s < settings.n_steps; ++s) {
      const double tm = (s + 0.5) * dt;
      const auto h = oracle::dense_hamiltonian(v_rad, kappa_rad, pulse.omega(tm),
                                               pulse.delta(tm));
      psi = oracle::dense_expv(h, dt, psi);
    }
    const double overlap = std::abs(psi.dot(traj.final_state()));
    CHECK(overlap >= 1.0 - 1e-8);
  }
}

TEST_CASE("trajectory recording respects the stride") {
  auto terms = build_hamiltonian(table_for({2}));
  EvolveSettings settings;
  settings.n_steps = 10;
  settings.record_stride = 4;
  auto traj = evolve(terms, constant_pulse(1.0, 0.0, 0.1), settings,
                     StateVector::all_down(2));
  // t=0, then after steps 4, 8, 10
  REQUIRE(traj.times_us.size() == 4);
  CHECK(traj.times_us[0] == 0.0);
  CHECK(traj.times_us[1] == doctest::Approx(0.04));
  CHECK(traj.times_us[2] == doctest::Approx(0.08));
  CHECK(traj.times_us[3] == doctest::Approx(0.1));
}

TEST_CASE("evolve validates its inputs") {
  auto terms = build_hamiltonian(table_for({2}));
  EvolveSettings settings;
  StateVector bad;
  bad.n_qubits = 2;
  bad.amp = Eigen::VectorXcd::Zero(4);
  bad.amp[0] = 0.5;  // unnormalized
  CHECK_THROWS_AS(evolve(terms, constant_pulse(1, 0, 0.1), settings, bad),
                  DomainError);
  StateVector wrong = StateVector::all_down(3);
  CHECK_THROWS_AS(evolve(terms, constant_pulse(1, 0, 0.1), settings, wrong),
                  DomainError);
}

TEST_CASE("plain recurrence agrees with the re-orthogonalized propagator") {
  auto table = table_for({2, 4});
  auto terms = build_hamiltonian(table);
  const double v0_rad = table.v0 * hz_to_rad_per_us;
  const double kbar_rad = table.kappa.mean() * hz_to_rad_per_us;
  PulseParams p;
  p.omega_knots = {0.7 * v0_rad, 1.1 * v0_rad, 0.9 * v0_rad};
  p.delta_knots = {0.3 * kbar_rad, kbar_rad, 1.7 * kbar_rad};
  p.duration_us = 0.05;
  EvolveSettings fast;
  fast.n_steps = 500;
  EvolveSettings safe = fast;
  safe.reorthogonalize = true;
  const auto a = evolve(terms, spline_pulse(p), fast, StateVector::all_down(8));
  const auto b = evolve(terms, spline_pulse(p), safe, StateVector::all_down(8));
  CHECK((a.final_state() - b.final_state()).norm() < 1e-8);
}

TEST_CASE("norm is conserved on a realistic 8-qubit pulse") {
  auto table = table_for({2, 4});
  auto terms = build_hamiltonian(table);
  const double v0_rad = table.v0 * hz_to_rad_per_us;
  const double kbar_rad = table.kappa.mean() * hz_to_rad_per_us;
  PulseParams p;
  p.omega_knots = {0.8 * v0_rad, 1.2 * v0_rad, 0.8 * v0_rad};
  p.delta_knots = {0.5 * kbar_rad, kbar_rad, 1.5 * kbar_rad};
  p.duration_us = 0.1;
  EvolveSettings settings;
  auto traj = evolve(terms, spline_pulse(p), settings, StateVector::all_down(8));
  CHECK(std::abs(traj.final_state().norm() - 1.0) < 1e-9);
}
