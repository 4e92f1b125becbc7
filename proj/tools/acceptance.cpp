// Acceptance gate: one scenario per release criterion, each printing a single
// [PASS] or [FAIL] line. The process exits nonzero if any gating scenario
// fails. Scenario a4 can additionally report a large-lattice stretch result
// with --stretch; that report never gates.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "ghz/bayesopt.hpp"
#include "ghz/coherence.hpp"
#include "ghz/config.hpp"
#include "ghz/dynamics.hpp"
#include "ghz/experiments.hpp"
#include "ghz/io.hpp"
#include "ghz/lattice.hpp"
#include "ghz/noise.hpp"
#include "ghz/observables.hpp"
#include "ghz/pulses.hpp"
#include "ghz/rng.hpp"

namespace {

using namespace ghz;

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("ghz_accept_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

InteractionTable table_for(const std::vector<int>& extents,
                           double spacing_um = 1.5) {
  LatticeSpec spec;
  spec.extents = extents;
  spec.spacing_um = spacing_um;
  return interaction_matrix(build_positions(spec), spec.c6_hz_m6);
}

// Independent crossing value: enumerate coordinates, sum pairwise couplings in
// Hz, convert once. Mirrors no library internals beyond the arithmetic.
double crossing_oracle(const std::vector<int>& extents, double spacing_um,
                       double c6_hz_m6) {
  std::vector<std::array<double, 3>> pos;
  std::array<int, 3> ext = {1, 1, 1};
  for (std::size_t d = 0; d < extents.size(); ++d)
    ext[d] = extents[d];
  for (int z = 0; z < ext[2]; ++z)
    for (int y = 0; y < ext[1]; ++y)
      for (int x = 0; x < ext[0]; ++x)
        pos.push_back({x * spacing_um * 1e-6, y * spacing_um * 1e-6,
                       z * spacing_um * 1e-6});
  const int n = static_cast<int>(pos.size());
  double sum_hz = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = pos[i][0] - pos[j][0];
      const double dy = pos[i][1] - pos[j][1];
      const double dz = pos[i][2] - pos[j][2];
      const double r2 = dx * dx + dy * dy + dz * dz;
      sum_hz += c6_hz_m6 / (r2 * r2 * r2);
    }
  return (2.0 / n) * sum_hz * hz_to_rad_per_us;
}

double slope_over_window(const std::vector<double>& t,
                         const std::vector<double>& y, double t_lo,
                         double t_hi) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sty - st * sy) / (n * stt - st * st);
}

RunConfig config_from(const std::string& text) { return parse_config_text(text); }

// ---------------------------------------------------------------------------
// a1: Krylov propagation agrees with dense matrix-exponential propagation.
Outcome a1_krylov_vs_dense() {
  const std::vector<std::vector<int>> pool = {{2},    {3},    {4},      {5},
                                              {6},    {2, 2}, {2, 3},   {3, 2},
                                              {2, 2, 1}, {1, 2, 3}};
  Rng rng(20240817);
  double worst = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& extents = pool[static_cast<std::size_t>(
        rng.uniform_index(pool.size()))];
    const double spacing = rng.uniform(1.3, 1.8);
    auto table = table_for(extents, spacing);
    auto terms = build_hamiltonian(table);
    const int n = terms.n_qubits;
    const double v0 = table.v0 * hz_to_rad_per_us;

    PulseParams p;
    for (int k = 0; k < 3; ++k) {
      p.omega_knots[k] = rng.uniform(0.0, 2.0 * v0);
      p.delta_knots[k] = rng.uniform(-1.5 * v0, 1.5 * v0);
    }
    p.duration_us = rng.uniform(0.01, 0.03);
    auto pulse = spline_pulse(p);

    EvolveSettings settings;
    settings.n_steps = 150;
    auto traj = evolve(terms, pulse, settings, StateVector::all_down(n));

    // Dense propagation of the same piecewise-constant midpoint dynamics.
    const Eigen::MatrixXd v_rad = table.v * hz_to_rad_per_us;
    const Eigen::VectorXd kappa_rad = table.kappa * hz_to_rad_per_us;
    const std::int64_t dim = std::int64_t{1} << n;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi[0] = 1.0;
    const double dt = p.duration_us / settings.n_steps;
    for (int s = 0; s < settings.n_steps; ++s) {
      const double tm = (s + 0.5) * dt;
      const double omega = pulse.omega(tm);
      const double delta = pulse.delta(tm);
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
      for (std::int64_t b = 0; b < dim; ++b) {
        h(b, b) = terms.d0[b] - delta * terms.m[b];
        for (int q = 0; q < n; ++q)
          h(b ^ (std::int64_t{1} << q), b) += omega;
      }
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
      const Eigen::VectorXcd phases =
          (std::complex<double>(0.0, -dt) * eig.eigenvalues().array())
              .exp()
              .matrix();
      psi = eig.eigenvectors() *
            (phases.array() * (eig.eigenvectors().adjoint() * psi).array())
                .matrix();
    }
    worst = std::min(worst, std::abs(psi.dot(traj.final_state())));
  }
  return {worst >= 1.0 - 1e-8, "50 cases, worst overlap 1 - " +
                                   fmt(1.0 - worst, 12)};
}

// ---------------------------------------------------------------------------
// a2: pair crossing location matches the analytic mean interaction.
Outcome a2_crossings() {
  struct Case {
    std::vector<int> extents;
    const char* kind;
  };
  const std::vector<Case> cases = {
      {{2}, "1d"},    {{4}, "1d"},       {{2, 2}, "2d"},
      {{8}, "1d"},    {{2, 4}, "2d"},    {{2, 2, 2}, "3d"},
      {{12}, "1d"},   {{3, 4}, "2d"},    {{2, 2, 3}, "3d"}};
  double worst_rel = 0.0;
  for (const auto& c : cases) {
    auto table = table_for(c.extents);
    auto terms = build_hamiltonian(table);
    const std::uint64_t full =
        (std::uint64_t{1} << terms.n_qubits) - 1;
    const double found = find_crossing(terms, 0, full);
    const double expected = crossing_oracle(c.extents, 1.5, 1.56e-26);
    worst_rel = std::max(worst_rel,
                         std::abs(found - expected) / std::abs(expected));
  }
  // Two atoms: the crossing sits exactly at the pair interaction.
  auto table2 = table_for({2});
  auto terms2 = build_hamiltonian(table2);
  const double v_rad = table2.v(0, 1) * hz_to_rad_per_us;
  const bool exact2 = find_crossing(terms2, 0, 3) == v_rad;
  return {worst_rel <= 1e-10 && exact2,
          "9 lattices, worst relative error " + fmt(worst_rel, 14) +
              ", two-atom crossing exact: " + (exact2 ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// a3: two-qubit search reaches near-unit fidelity and matches a grid scan.
Outcome a3_two_qubit() {
  const std::string text = R"({
    "lattice": [2], "target": "phi", "duration_us": 0.1})";
  std::vector<double> best;
  auto dir = scratch_dir("a3");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto config = config_from(text);
    auto outcome =
        optimize_ghz(config, (dir / std::to_string(seed)).string(), seed);
    best.push_back(outcome.best_value);
  }
  const double med = median(best);

  // Coarse corroborating grid: three cell midpoints per dimension.
  auto config = config_from(text);
  auto w = make_workspace(config);
  EvolveSettings settings;
  double grid_best = 0.0;
  const std::array<double, 3> frac = {1.0 / 6.0, 0.5, 5.0 / 6.0};
  std::array<int, 6> ix{};
  for (ix[0] = 0; ix[0] < 3; ++ix[0])
    for (ix[1] = 0; ix[1] < 3; ++ix[1])
      for (ix[2] = 0; ix[2] < 3; ++ix[2])
        for (ix[3] = 0; ix[3] < 3; ++ix[3])
          for (ix[4] = 0; ix[4] < 3; ++ix[4])
            for (ix[5] = 0; ix[5] < 3; ++ix[5]) {
              Eigen::VectorXd raw(6);
              for (int d = 0; d < 6; ++d)
                raw[d] = w.space.lower[d] +
                         frac[static_cast<std::size_t>(ix[d])] *
                             (w.space.upper[d] - w.space.lower[d]);
              auto pulse = spline_pulse(params_from_vector(raw, 0.1));
              auto traj =
                  evolve(w.terms, pulse, settings, StateVector::all_down(2));
              grid_best = std::max(
                  grid_best,
                  fidelity(StateVector{2, traj.final_state()}, w.target));
            }
  std::filesystem::remove_all(dir);
  const bool pass = med >= 0.99 && med >= grid_best - 0.01;
  return {pass, "median best over 5 seeds " + fmt(med) + ", 3^6 grid best " +
                    fmt(grid_best)};
}

// ---------------------------------------------------------------------------
// a4: eight-atom search clears 0.90 and improves past its init phase.
Outcome a4_eight_atom(bool stretch) {
  const std::string text = R"({
    "lattice": [2, 4], "target": "phi", "duration_us": 0.1})";
  std::vector<double> best;
  bool improved = true;
  auto dir = scratch_dir("a4");
  const double t0 = now_s();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto config = config_from(text);
    auto outcome =
        optimize_ghz(config, (dir / std::to_string(seed)).string(), seed);
    best.push_back(outcome.best_value);
    double init_best = 0.0;
    for (const auto& row : outcome.trace.rows)
      if (row.init_phase) init_best = std::max(init_best, row.value);
    improved = improved && outcome.best_value > init_best;
  }
  const double elapsed = now_s() - t0;
  std::filesystem::remove_all(dir);
  const double med = median(best);
  std::string detail = "median best over 3 seeds " + fmt(med) +
                       ", init phase strictly improved: " +
                       (improved ? "yes" : "no") + ", " + fmt(elapsed / 60, 1) +
                       " min";
  if (stretch) {
    auto config = config_from(R"({
      "lattice": [3, 4], "target": "phi", "duration_us": 0.1})");
    auto sdir = scratch_dir("a4_stretch");
    auto outcome = optimize_ghz(config, sdir.string(), 1);
    std::filesystem::remove_all(sdir);
    detail += "; stretch 12-atom best " + fmt(outcome.best_value) +
              " (reported, not gating)";
  } else {
    detail += "; stretch 12-atom report skipped (enable with --stretch)";
  }
  return {med >= 0.90 && improved && elapsed < 1800.0, detail};
}

// ---------------------------------------------------------------------------
// a5: quench fidelity peaks near g = 1 with a clear margin over the edges.
Outcome a5_quench() {
  auto table = table_for({2, 4});
  auto terms = build_hamiltonian(table);
  const double v0 = table.v0 * hz_to_rad_per_us;
  const double delta_star =
      find_crossing(terms, 0, (std::uint64_t{1} << 8) - 1);
  auto target = ghz_phi_target(8);
  EvolveSettings settings;
  std::vector<double> g_values, f_values;
  for (int i = 2; i <= 20; ++i) {
    const double g = 0.1 * i;
    QuenchProfile prof;
    prof.omega1 = g * v0;
    prof.omega2 = g * v0;
    prof.duration_us = 0.1;
    prof.ramp_start = 0.25;
    prof.ramp_end = 0.75;
    auto pulse = quench_pulse(prof, delta_star);
    auto traj = evolve(terms, pulse, settings, StateVector::all_down(8));
    g_values.push_back(g);
    f_values.push_back(fidelity(StateVector{8, traj.final_state()}, target));
  }
  const auto it = std::max_element(f_values.begin(), f_values.end());
  const std::size_t k = static_cast<std::size_t>(it - f_values.begin());
  const double g_star = g_values[k];
  const double margin_lo = *it - f_values.front();
  const double margin_hi = *it - f_values.back();
  const bool pass = g_star >= 0.5 && g_star <= 1.5 && margin_lo >= 0.05 &&
                    margin_hi >= 0.05;
  return {pass, "argmax g = " + fmt(g_star, 1) + " (F = " + fmt(*it) +
                    "), margins over g = 0.2 / 2.0: " + fmt(margin_lo) + " / " +
                    fmt(margin_hi)};
}

// ---------------------------------------------------------------------------
// Optimized pulses frozen from optimizer runs; producing commands recorded in
// the repository documentation. Placeholders are overwritten before release.
struct FrozenPulse {
  std::array<double, 3> omega;
  std::array<double, 3> delta;
  double duration_us;
};

// 8 atoms, [2, 4], psi target: `optimize` at seed 1, budget 300, T = 0.1.
constexpr FrozenPulse kPsi8{
    {14056.083298603799, 14043.342639355908, 0.0},
    {-33883.707609852754, -8565.63823097735, 35009.63928111603},
    0.1};
// 12 atoms, [3, 4], psi target.
constexpr FrozenPulse kPsi12{{0, 0, 0}, {0, 0, 0}, 0.1};
// 8 atoms, [2, 4], psi target, trained on the noisy-ensemble objective.
constexpr FrozenPulse kPsi8Robust{{0, 0, 0}, {0, 0, 0}, 0.1};

PulseParams pulse_params(const FrozenPulse& f) {
  PulseParams p;
  p.omega_knots = f.omega;
  p.delta_knots = f.delta;
  p.duration_us = f.duration_us;
  return p;
}

// a6: entropy growth is ballistic at matched slopes; final half-system
// entropy sits at one bit.
Outcome a6_entropy() {
  struct Sized {
    std::vector<int> extents;
    FrozenPulse pulse;
    std::vector<int> half;
  };
  const std::vector<Sized> sizes = {
      {{2, 4}, kPsi8, {0, 1, 2, 3}},
      {{3, 4}, kPsi12, {0, 1, 2, 3, 4, 5}}};
  std::vector<double> slopes, finals;
  for (const auto& sized : sizes) {
    auto table = table_for(sized.extents);
    auto terms = build_hamiltonian(table);
    const int n = terms.n_qubits;
    EvolveSettings settings;
    settings.record_stride = 10;
    auto pulse = spline_pulse(pulse_params(sized.pulse));
    auto traj = evolve(terms, pulse, settings, StateVector::all_down(n));
    std::vector<double> ent;
    for (std::size_t k = 0; k < traj.states.size(); ++k)
      ent.push_back(entanglement_entropy(StateVector{n, traj.states[k]},
                                         sized.half));
    const double T = sized.pulse.duration_us;
    slopes.push_back(slope_over_window(traj.times_us, ent, 0.1 * T, 0.4 * T));
    finals.push_back(ent.back());
  }
  const double ratio = slopes[0] > 0 && slopes[1] > 0
                           ? std::max(slopes[0], slopes[1]) /
                                 std::min(slopes[0], slopes[1])
                           : 1e9;
  const bool pass = ratio <= 1.5 && std::abs(finals[0] - 1.0) <= 0.05 &&
                    std::abs(finals[1] - 1.0) <= 0.05;
  return {pass, "slopes " + fmt(slopes[0], 1) + " / " + fmt(slopes[1], 1) +
                    " bits/us (ratio " + fmt(ratio, 2) + "), final entropies " +
                    fmt(finals[0]) + " / " + fmt(finals[1]) + " bits"};
}

// ---------------------------------------------------------------------------
// a7: channel compositions never grow the Bloch vector or break the bound.
Outcome a7_channel_suite() {
  Rng rng(7771);
  double worst_growth = 0.0;
  double worst_violation = -1.0;
  for (int trial = 0; trial < 10000; ++trial) {
    // Random density matrix on {alpha, beta, other}: A A^dag normalized.
    Eigen::Matrix3cd a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        a(r, c) = std::complex<double>(rng.normal(), rng.normal());
    ReducedGhzState state;
    state.rho = a * a.adjoint();
    state.rho /= state.rho.trace();

    const BlochVector4 initial = bloch_vector(state);
    const double coherence_ti = std::abs(state.rho(0, 1));
    double norm_before = initial.norm();
    const int n_channels = 1 + static_cast<int>(rng.uniform_index(8));
    for (int c = 0; c < n_channels; ++c) {
      Channel channel;
      switch (rng.uniform_index(4)) {
        case 0:
          channel = Channel::coupling(rng.uniform(-2.0 * kPi, 2.0 * kPi),
                                      rng.uniform(-kPi, kPi));
          break;
        case 1:
          channel = Channel::dephasing(rng.uniform01());
          break;
        case 2:
          channel = Channel::decay(rng.uniform01());
          break;
        default:
          channel = Channel::other_unitary(rng.uniform(-kPi, kPi));
      }
      state = apply_channel(state, channel);
      const double norm_after = bloch_vector(state).norm();
      worst_growth = std::max(worst_growth, norm_after - norm_before);
      norm_before = norm_after;
    }
    const BlochVector4 fin = bloch_vector(state);
    const CoherenceBound cb = coherence_lower_bound(
        initial.s_alpha, initial.s_beta, fin.s_alpha, fin.s_beta);
    worst_violation = std::max(
        worst_violation, cb.bound - 2.0 * coherence_ti * coherence_ti);
  }

  // Ramsey saturation on a perfect GHZ state.
  const GhzTarget target = ghz_phi_target(4);
  StateVector psi = StateVector::all_down(4);
  psi.amp.setZero();
  psi.amp[0] = 1.0 / std::sqrt(2.0);
  psi.amp[15] = 1.0 / std::sqrt(2.0);
  const RamseyResult res =
      ramsey_bound_from_state(psi, target, kPi / 2.0, -kPi / 2.0);
  const bool saturated = std::abs(res.bound - 0.5) <= 1e-9 &&
                         std::abs(res.true_coherence - 0.5) <= 1e-12;
  const bool pass =
      worst_growth <= 1e-12 && worst_violation <= 1e-12 && saturated;
  return {pass, "10000 compositions, worst norm growth " +
                    fmt(worst_growth, 15) + ", worst bound excess " +
                    fmt(worst_violation, 15) + ", saturation bound " +
                    fmt(res.bound, 10)};
}

// ---------------------------------------------------------------------------
// a8: the optimized pulse survives 3% amplitude noise, and ensemble training
// does at least as well under the same ensemble.
Outcome a8_noise() {
  auto table = table_for({2, 4});
  auto terms = build_hamiltonian(table);
  LatticeSpec spec;
  spec.extents = {2, 4};
  const GhzTarget target = ghz_psi_target(spec);
  EvolveSettings settings;

  auto clean_pulse = spline_pulse(pulse_params(kPsi8));
  auto robust_pulse = spline_pulse(pulse_params(kPsi8Robust));
  auto traj = evolve(terms, clean_pulse, settings, StateVector::all_down(8));
  const double clean_f =
      fidelity(StateVector{8, traj.final_state()}, target);

  NoiseSpec noise;
  noise.level = 0.03;
  noise.n_members = 30;
  const std::uint64_t eval_seed = 1234;
  const auto ens_clean =
      ensemble_fidelity(terms, clean_pulse, target, noise, settings, eval_seed);
  const auto ens_robust = ensemble_fidelity(terms, robust_pulse, target, noise,
                                            settings, eval_seed);
  const bool pass =
      std::abs(clean_f - ens_clean.mean_fidelity) <= 0.05 &&
      ens_robust.mean_fidelity >= ens_clean.mean_fidelity;
  return {pass, "noiseless F " + fmt(clean_f) + ", ensemble F " +
                    fmt(ens_clean.mean_fidelity) + " (gap " +
                    fmt(std::abs(clean_f - ens_clean.mean_fidelity)) +
                    "), ensemble-trained F " + fmt(ens_robust.mean_fidelity)};
}

// ---------------------------------------------------------------------------
// a9: the optimizer beats random search on a known concave benchmark.
Outcome a9_bo_quality() {
  const std::array<double, 6> c = {0.37, 0.61, 0.22, 0.78, 0.45, 0.58};
  const std::array<double, 6> w = {1.0, 0.8, 1.2, 0.9, 1.1, 0.7};
  const auto objective = [&](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (int d = 0; d < 6; ++d) s += w[static_cast<std::size_t>(d)] *
                                     (x[d] - c[static_cast<std::size_t>(d)]) *
                                     (x[d] - c[static_cast<std::size_t>(d)]);
    return 1.0 - s;
  };
  SearchSpace space;
  space.lower = Eigen::VectorXd::Zero(6);
  space.upper = Eigen::VectorXd::Ones(6);

  int wins = 0;
  std::vector<double> best_at_150;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    BoOptions options;
    auto trace = run_bo(objective, space, seed, options, {});
    best_at_150.push_back(trace.rows[149].best_so_far);

    Rng rng(derive_seed(seed, 11));
    double random_best = -1e300;
    for (int i = 0; i < 300; ++i) {
      Eigen::VectorXd x(6);
      for (int d = 0; d < 6; ++d) x[d] = rng.uniform01();
      random_best = std::max(random_best, objective(x));
    }
    if (trace.best_value > random_best) ++wins;
  }
  const double med150 = median(best_at_150);
  const bool pass = wins >= 8 && med150 >= 1.0 - 1e-2;
  return {pass, "wins vs random " + std::to_string(wins) +
                    "/10, median best by iteration 150: " + fmt(med150) +
                    " (optimum 1.0)"};
}

// ---------------------------------------------------------------------------
// a10: repeated runs reproduce every CSV byte for byte.
Outcome a10_determinism() {
  const std::string text = R"({
    "lattice": [2, 2], "target": "phi", "duration_us": 0.02,
    "evolve": {"n_steps": 100, "record_stride": 10},
    "bo": {"budget": 10, "n_init": 5},
    "noise": {"level": 0.03, "n_members": 6},
    "pulse": {"omega_knots": [5000, 9000, 4000],
              "delta_knots": [-2000, 0, 2500]},
    "spectrum": {"snapshots": 9}})";
  const std::uint64_t seed = 42;
  const std::vector<double> g_values = {0.4, 0.8, 1.2, 1.6};

  auto run_all = [&](const std::filesystem::path& dir) {
    auto config = config_from(text);
    optimize_ghz(config, (dir / "optimize").string(), seed);
    evolve_report(config, (dir / "evolve").string(), seed);
    spectrum_report(config, (dir / "spectrum").string(), seed);
    entropy_report(config, (dir / "entropy").string(), seed);
    level_diagram_report(config, (dir / "levels").string(), seed);
    quench_scan(config, g_values, (dir / "quench").string(), seed);
    coherence_bound_report(config, 5, (dir / "coherence").string(), seed);
    noise_eval(config, (dir / "noise").string(), seed);
  };
  auto dir_a = scratch_dir("a10_first");
  auto dir_b = scratch_dir("a10_second");
  run_all(dir_a);
  run_all(dir_b);

  int compared = 0;
  bool identical = true;
  std::string first_diff;
  for (auto it = std::filesystem::recursive_directory_iterator(dir_a);
       it != std::filesystem::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const auto ext = it->path().extension();
    if (ext != ".csv" && it->path().filename() != "config.json" &&
        it->path().filename() != "summary.json")
      continue;
    const auto rel = std::filesystem::relative(it->path(), dir_a);
    ++compared;
    if (read_file(it->path().string()) != read_file((dir_b / rel).string())) {
      identical = false;
      if (first_diff.empty()) first_diff = rel.string();
    }
  }
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  const bool pass = identical && compared >= 20;
  return {pass, std::to_string(compared) + " files compared across 8 commands" +
                    (identical ? ", all identical"
                               : ", first difference: " + first_diff)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate"};
  std::vector<int> only;
  bool stretch = false;
  app.add_option("--only", only, "run a subset of scenarios by number");
  app.add_flag("--stretch", stretch,
               "also run the non-gating 12-atom stretch report in a4");
  CLI11_PARSE(app, argc, argv);

  struct Scenario {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Scenario> scenarios = {
      {1, "krylov vs dense propagation", a1_krylov_vs_dense},
      {2, "analytic pair crossings", a2_crossings},
      {3, "two-qubit end-to-end search", a3_two_qubit},
      {4, "eight-atom search quality", [&] { return a4_eight_atom(stretch); }},
      {5, "quench criticality", a5_quench},
      {6, "ballistic entropy growth", a6_entropy},
      {7, "channel monotonicity and bound", a7_channel_suite},
      {8, "noise robustness", a8_noise},
      {9, "optimizer vs random search", a9_bo_quality},
      {10, "byte-level determinism", a10_determinism},
  };

  bool all_pass = true;
  for (const auto& scenario : scenarios) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), scenario.id) == only.end())
      continue;
    const double t0 = now_s();
    Outcome outcome;
    try {
      outcome = scenario.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double dt = now_s() - t0;
    std::printf("[%s] a%d %s: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL",
                scenario.id, scenario.name, outcome.detail.c_str(), dt);
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
