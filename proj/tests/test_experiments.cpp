#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ghz/config.hpp"
#include "ghz/errors.hpp"
#include "ghz/experiments.hpp"
#include "ghz/io.hpp"
#include "ghz/manifest.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("ghz_exp_" + tag);
  fs::remove_all(dir);
  return dir;
}

ghz::RunConfig small_config(const std::string& target, double duration_us = 0.02) {
  return ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": ")" + target +
      R"(", "duration_us": )" + ghz::format_double(duration_us) +
      R"(, "evolve": {"n_steps": 100, "record_stride": 10}})");
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("make_workspace derives the scales and the search box") {
  const ghz::RunConfig config = small_config("phi");
  const ghz::Workspace w = ghz::make_workspace(config);
  CHECK(w.terms.n_qubits == 4);
  CHECK(w.v0_rad_per_us == doctest::Approx(8605.0).epsilon(0.01));
  // delta_star = (2/N) sum_{i<j} V_ij, recomputed from scratch.
  const double expected = oracle::phi_crossing_rad_per_us({2, 2}, 1.5, 1.56e-26);
  CHECK(w.delta_star == doctest::Approx(expected).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(w.space.lower[i] == 0.0);
    CHECK(w.space.upper[i] == doctest::Approx(2.0 * w.v0_rad_per_us));
    CHECK(w.space.lower[3 + i] == doctest::Approx(-1.5 * w.delta_star));
    CHECK(w.space.upper[3 + i] == doctest::Approx(1.5 * w.delta_star));
  }
}

TEST_CASE("zero duration is rejected before any work happens") {
  ghz::RunConfig config = small_config("phi");
  config.duration_us = 0.0;
  CHECK_THROWS_AS(ghz::make_workspace(config), ghz::ConfigError);
  CHECK_THROWS_AS(ghz::optimize_ghz(config, fresh_dir("zero").string(), 1),
                  ghz::ConfigError);
}

TEST_CASE("optimize with budget == n_init is deterministic in the seed") {
  ghz::RunConfig config = small_config("phi");
  config.bo.budget = 6;
  config.bo.n_init = 6;
  const fs::path dir_a = fresh_dir("det_a");
  const fs::path dir_b = fresh_dir("det_b");
  const ghz::OptimizeOutcome a = ghz::optimize_ghz(config, dir_a.string(), 42);
  const ghz::OptimizeOutcome b = ghz::optimize_ghz(config, dir_b.string(), 42);
  CHECK(a.best_value == b.best_value);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.best_params.omega_knots[i] == b.best_params.omega_knots[i]);
    CHECK(a.best_params.delta_knots[i] == b.best_params.delta_knots[i]);
  }
  // The whole artifact set is byte-identical between the two runs.
  for (const char* name : {"trace.csv", "trajectory.csv", "pulse.csv",
                           "config.json", "summary.json"}) {
    CAPTURE(name);
    CHECK(ghz::read_file((dir_a / name).string()) ==
          ghz::read_file((dir_b / name).string()));
  }
  // A different seed explores differently.
  const fs::path dir_c = fresh_dir("det_c");
  const ghz::OptimizeOutcome c = ghz::optimize_ghz(config, dir_c.string(), 43);
  CHECK(ghz::read_file((dir_a / "trace.csv").string()) !=
        ghz::read_file((dir_c / "trace.csv").string()));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::remove_all(dir_c);
}

TEST_CASE("optimize writes the full artifact set with a consistent manifest") {
  ghz::RunConfig config = small_config("phi");
  config.bo.budget = 6;
  config.bo.n_init = 6;
  const fs::path dir = fresh_dir("artifacts");
  ghz::optimize_ghz(config, dir.string(), 7);

  for (const char* name : {"config.json", "trace.csv", "trajectory.csv",
                           "pulse.csv", "summary.json", "manifest.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name));
  }
  CHECK_FALSE(fs::exists(dir / "trace.csv.partial"));

  const ghz::Manifest manifest =
      ghz::read_manifest((dir / "manifest.json").string());
  CHECK(manifest.config_hash == ghz::config_hash(config));
  CHECK(manifest.seed == 7);
  CHECK(manifest.version == ghz::kVersion);
  std::set<std::string> names;
  for (const auto& file : manifest.files) {
    names.insert(file.name);
    CHECK(ghz::file_sha256((dir / file.name).string()) == file.sha256);
  }
  CHECK(names.count("trace.csv") == 1);
  CHECK(names.count("config.json") == 1);
  CHECK(names.count("manifest.json") == 0);

  // trace.csv: header plus one row per evaluation.
  const std::string trace = ghz::read_file((dir / "trace.csv").string());
  CHECK(count_lines(trace) == 7);
  fs::remove_all(dir);
}

TEST_CASE("an interrupted optimize resumes to byte-identical artifacts") {
  ghz::RunConfig config = small_config("phi");
  config.bo.budget = 12;
  config.bo.n_init = 8;
  config.bo.fit_every = 2;
  const fs::path dir_full = fresh_dir("resume_full");
  const fs::path dir_cut = fresh_dir("resume_cut");
  ghz::optimize_ghz(config, dir_full.string(), 11);
  const std::string trace = ghz::read_file((dir_full / "trace.csv").string());

  // Keep the header plus the first 9 rows, as if the run died mid-flight.
  std::size_t pos = 0;
  for (int newline = 0; newline < 10; ++newline) pos = trace.find('\n', pos) + 1;
  fs::create_directories(dir_cut);
  {
    std::ofstream out(dir_cut / "trace.csv.partial", std::ios::binary);
    out << trace.substr(0, pos);
  }
  const ghz::OptimizeOutcome resumed = ghz::optimize_ghz(config, dir_cut.string(), 11);
  CHECK(ghz::read_file((dir_cut / "trace.csv").string()) == trace);
  CHECK(ghz::read_file((dir_cut / "trajectory.csv").string()) ==
        ghz::read_file((dir_full / "trajectory.csv").string()));
  CHECK(resumed.trace.rows.size() == 12);
  fs::remove_all(dir_full);
  fs::remove_all(dir_cut);
}

TEST_CASE("a finished optimize directory replays without re-evaluating") {
  ghz::RunConfig config = small_config("phi");
  config.bo.budget = 6;
  config.bo.n_init = 6;
  const fs::path dir = fresh_dir("replay");
  ghz::optimize_ghz(config, dir.string(), 3);
  const std::string trace = ghz::read_file((dir / "trace.csv").string());
  const ghz::OptimizeOutcome again = ghz::optimize_ghz(config, dir.string(), 3);
  CHECK(ghz::read_file((dir / "trace.csv").string()) == trace);
  CHECK(again.trace.rows.size() == 6);
  fs::remove_all(dir);
}

TEST_CASE("quench scan: weak drive pins the phi fidelity at one half") {
  ghz::RunConfig config = small_config("phi");
  const fs::path dir = fresh_dir("quench_phi");
  const ghz::QuenchOutcome outcome =
      ghz::quench_scan(config, {1e-4, 1e-3}, dir.string(), 0);
  REQUIRE(outcome.rows.size() == 2);
  // The state barely moves off all-down: rho_aa = 1, so F = 1/2.
  CHECK(outcome.rows[0].fidelity == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(outcome.rows[0].omega_rad_per_us ==
        doctest::Approx(1e-4 * 8605.0).epsilon(0.01));
  fs::remove_all(dir);
}

TEST_CASE("quench scan: weak drive gives zero psi fidelity") {
  ghz::RunConfig config = small_config("psi");
  const fs::path dir = fresh_dir("quench_psi");
  const ghz::QuenchOutcome outcome =
      ghz::quench_scan(config, {1e-4}, dir.string(), 0);
  CHECK(outcome.rows[0].fidelity < 1e-4);
  fs::remove_all(dir);
}

TEST_CASE("quench scan rejects non-positive g and writes one row per value") {
  ghz::RunConfig config = small_config("phi");
  const fs::path dir = fresh_dir("quench_rows");
  CHECK_THROWS_AS(ghz::quench_scan(config, {0.5, -1.0}, dir.string(), 0),
                  ghz::DomainError);
  CHECK_THROWS_AS(ghz::quench_scan(config, {}, dir.string(), 0), ghz::DomainError);
  const auto g_values = ghz::default_g_values();
  REQUIRE(g_values.size() == 19);
  CHECK(g_values.front() == doctest::Approx(0.2));
  CHECK(g_values.back() == doctest::Approx(2.0));
  ghz::quench_scan(config, g_values, dir.string(), 0);
  const std::string csv = ghz::read_file((dir / "quench.csv").string());
  CHECK(count_lines(csv) == 20);
  fs::remove_all(dir);
}

TEST_CASE("spectrum: populations sum to one and start on the all-down line") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "phi", "duration_us": 0.02,
          "evolve": {"n_steps": 100},
          "pulse": {"omega_knots": [900, 1500, 600],
                    "delta_knots": [-200, 300, 500]},
          "spectrum": {"snapshots": 9}})");
  const fs::path dir = fresh_dir("spectrum");
  const ghz::SpectrumOutcome outcome = ghz::spectrum_report(config, dir.string(), 0);
  REQUIRE(outcome.snapshots.size() <= 9);
  REQUIRE(outcome.snapshots.size() >= 2);
  for (const auto& snap : outcome.snapshots) {
    CHECK(snap.populations.sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(snap.populations.minCoeff() >= 0.0);
  }
  // t = 0: no drive yet, the initial state sits on one eigenstate with M = -N.
  const auto& first = outcome.snapshots.front();
  int k_max = 0;
  first.populations.maxCoeff(&k_max);
  CHECK(first.populations[k_max] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(first.magnetizations[k_max] == doctest::Approx(-4.0).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("spectrum: zero drive with constant detuning freezes the populations") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [3], "target": "phi", "duration_us": 0.05,
          "evolve": {"n_steps": 100},
          "pulse": {"omega_knots": [0, 0, 0],
                    "delta_knots": [-70, -70, -70]},
          "spectrum": {"snapshots": 7}})");
  const fs::path dir = fresh_dir("spectrum_frozen");
  const ghz::SpectrumOutcome outcome = ghz::spectrum_report(config, dir.string(), 0);
  REQUIRE(outcome.snapshots.size() >= 3);
  const Eigen::VectorXd p0 = outcome.snapshots.front().populations;
  for (const auto& snap : outcome.snapshots)
    for (Eigen::Index k = 0; k < p0.size(); ++k)
      CHECK(snap.populations[k] == doctest::Approx(p0[k]).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("entropy: product initial state carries zero entropy") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "phi", "duration_us": 0.02,
          "evolve": {"n_steps": 100, "record_stride": 10},
          "pulse": {"omega_knots": [900, 1500, 600],
                    "delta_knots": [-200, 300, 500]},
          "entropy": {"partitions": [[0], [0, 1], [1, 2, 3]]}})");
  const fs::path dir = fresh_dir("entropy");
  const ghz::EntropyOutcome outcome = ghz::entropy_report(config, dir.string(), 0);
  REQUIRE(outcome.partitions.size() == 3);
  REQUIRE(outcome.times_us.front() == 0.0);
  for (Eigen::Index p = 0; p < 3; ++p) {
    CHECK(std::abs(outcome.entropies(0, p)) < 1e-10);
    // Entropy stays within [0, partition size] bits.
    for (Eigen::Index k = 0; k < outcome.entropies.rows(); ++k) {
      CHECK(outcome.entropies(k, p) >= -1e-12);
      CHECK(outcome.entropies(k, p) <=
            static_cast<double>(outcome.partitions[static_cast<std::size_t>(p)].size()) + 1e-12);
    }
  }
  // Slopes agree with a direct least-squares fit on the returned series.
  const double t_lo = 0.1 * config.duration_us;
  const double t_hi = 0.4 * config.duration_us;
  for (Eigen::Index p = 0; p < 3; ++p) {
    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < outcome.times_us.size(); ++k)
      if (outcome.times_us[k] >= t_lo && outcome.times_us[k] <= t_hi) {
        ts.push_back(outcome.times_us[k]);
        ys.push_back(outcome.entropies(static_cast<Eigen::Index>(k), p));
      }
    REQUIRE(ts.size() >= 2);
    const double slope = oracle::least_squares_slope(ts, ys);
    CHECK(outcome.slopes[static_cast<std::size_t>(p)] ==
          doctest::Approx(slope).epsilon(1e-12));
  }
  fs::remove_all(dir);
}

TEST_CASE("level diagram: phi crossing matches the analytic identity") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "phi", "duration_us": 0.02,
          "levels": {"points": 11}})");
  const fs::path dir = fresh_dir("levels");
  const ghz::LevelOutcome outcome = ghz::level_diagram_report(config, dir.string(), 0);
  CHECK(outcome.phi.exists);
  const double expected = oracle::phi_crossing_rad_per_us({2, 2}, 1.5, 1.56e-26);
  CHECK(outcome.phi.delta_star == doctest::Approx(expected).epsilon(1e-12));
  CHECK(outcome.written.size() == 16);
  const std::string csv = ghz::read_file((dir / "levels.csv").string());
  CHECK(count_lines(csv) == 1 + 16 * 11);
  fs::remove_all(dir);
}

TEST_CASE("level diagram: balanced psi pair is flagged as parallel") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2], "target": "psi", "duration_us": 0.02,
          "levels": {"points": 5}})");
  const fs::path dir = fresh_dir("levels_psi");
  const ghz::LevelOutcome outcome = ghz::level_diagram_report(config, dir.string(), 0);
  CHECK_FALSE(outcome.psi.exists);
  const std::string summary = ghz::read_file((dir / "summary.json").string());
  CHECK(summary.find("parallel") != std::string::npos);
  fs::remove_all(dir);

  // An odd chain has Neel components of unequal magnetization: a crossing.
  ghz::RunConfig odd = ghz::parse_config_text(
      R"({"lattice": [3], "target": "psi", "duration_us": 0.02,
          "levels": {"points": 5}})");
  const fs::path dir_odd = fresh_dir("levels_odd");
  const ghz::LevelOutcome with = ghz::level_diagram_report(odd, dir_odd.string(), 0);
  CHECK(with.psi.exists);
  fs::remove_all(dir_odd);
}

TEST_CASE("level diagram: crossing detuning grows with coordination number") {
  auto crossing = [](const std::string& extents) {
    ghz::RunConfig config = ghz::parse_config_text(
        R"({"lattice": )" + extents +
        R"(, "target": "phi", "duration_us": 0.02, "levels": {"points": 3}})");
    const fs::path dir = fresh_dir("levels_dim");
    const ghz::LevelOutcome outcome =
        ghz::level_diagram_report(config, dir.string(), 0);
    fs::remove_all(dir);
    return outcome.phi.delta_star;
  };
  const double chain = crossing("[8]");
  const double plane = crossing("[2, 4]");
  const double cube = crossing("[2, 2, 2]");
  CHECK(chain < plane);
  CHECK(plane < cube);
}

TEST_CASE("level diagram: twelve atoms restrict the written subset") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [3, 4], "target": "psi", "duration_us": 0.02,
          "levels": {"points": 5}})");
  const fs::path dir = fresh_dir("levels_12");
  const ghz::LevelOutcome outcome = ghz::level_diagram_report(config, dir.string(), 0);
  CHECK(outcome.written.size() < 4096);
  CHECK(outcome.written.size() > 4);
  const std::uint64_t neel = ghz::neel_bitmask(config.lattice);
  const std::set<std::uint64_t> written(outcome.written.begin(), outcome.written.end());
  for (std::uint64_t b : {std::uint64_t{0}, std::uint64_t{4095}, neel, 4095 ^ neel})
    CHECK(written.count(b) == 1);
  const std::string summary = ghz::read_file((dir / "summary.json").string());
  CHECK(summary.find("\"restricted\": true") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("evolve report reproduces the final fidelity of a direct evolution") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "phi", "duration_us": 0.02,
          "evolve": {"n_steps": 100, "record_stride": 10},
          "pulse": {"omega_knots": [900, 1500, 600],
                    "delta_knots": [-200, 300, 500]}})");
  const fs::path dir = fresh_dir("evolve");
  const ghz::EvolveOutcome outcome = ghz::evolve_report(config, dir.string(), 0);
  CHECK(outcome.trajectory.times_us.size() == 11);
  CHECK(outcome.final_fidelity >= 0.0);
  CHECK(outcome.final_fidelity <= 1.0);
  // trajectory.csv's last row carries the same fidelity.
  const std::string csv = ghz::read_file((dir / "trajectory.csv").string());
  const auto last_start = csv.rfind('\n', csv.size() - 2);
  const auto cells = ghz::split_csv_line(
      csv.substr(last_start + 1, csv.size() - last_start - 2));
  CHECK(std::stod(cells[1]) == doctest::Approx(outcome.final_fidelity).epsilon(1e-15));
  // A pulse section is mandatory here.
  ghz::RunConfig no_pulse = small_config("phi");
  CHECK_THROWS_AS(ghz::evolve_report(no_pulse, fresh_dir("evolve_np").string(), 0),
                  ghz::ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("noise eval matches a direct ensemble call and records members") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "phi", "duration_us": 0.02,
          "evolve": {"n_steps": 100},
          "noise": {"level": 0.05, "n_members": 6},
          "pulse": {"omega_knots": [900, 1500, 600],
                    "delta_knots": [-200, 300, 500]}})");
  const fs::path dir = fresh_dir("noise_eval");
  const ghz::NoiseEvalOutcome outcome = ghz::noise_eval(config, dir.string(), 5);
  CHECK(outcome.ensemble.member_fidelities.size() == 6);

  ghz::Workspace w = ghz::make_workspace(config);
  ghz::NoiseSpec spec;
  spec.level = 0.05;
  spec.n_members = 6;
  ghz::EvolveSettings settings = config.evolve;
  settings.record_stride = 0;
  const ghz::EnsembleResult direct = ghz::ensemble_fidelity(
      w.terms, ghz::pulse_from_config(config), w.target, spec, settings, 5);
  CHECK(outcome.ensemble.mean_fidelity == direct.mean_fidelity);
  CHECK(outcome.ensemble.variance == direct.variance);

  const std::string csv = ghz::read_file((dir / "ensemble.csv").string());
  CHECK(count_lines(csv) == 7);
  fs::remove_all(dir);
}

TEST_CASE("coherence bound report never violates the exact coherence") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "phi", "duration_us": 0.01,
          "evolve": {"n_steps": 60}})");
  const fs::path dir = fresh_dir("bounds");
  const ghz::CoherenceOutcome outcome =
      ghz::coherence_bound_report(config, 40, dir.string(), 9);
  REQUIRE(outcome.trials.size() == 40);
  CHECK(outcome.max_violation <= 1e-12);
  int positive = 0;
  for (const auto& trial : outcome.trials) {
    CHECK(trial.result.bound <=
          2.0 * trial.result.true_coherence * trial.result.true_coherence + 1e-12);
    CHECK(trial.result.coherence_min <= trial.result.true_coherence + 1e-9);
    if (trial.result.bound > 0.0) ++positive;
  }
  CHECK(positive > 0);
  const std::string csv = ghz::read_file((dir / "bounds.csv").string());
  CHECK(count_lines(csv) == 41);
  fs::remove_all(dir);
}

TEST_CASE("reports are byte-deterministic across repeated runs") {
  ghz::RunConfig config = ghz::parse_config_text(
      R"({"lattice": [2, 2], "target": "psi", "duration_us": 0.02,
          "evolve": {"n_steps": 100, "record_stride": 20},
          "pulse": {"omega_knots": [900, 1500, 600],
                    "delta_knots": [-200, 300, 500]},
          "entropy": {"partitions": [[0, 1]]},
          "spectrum": {"snapshots": 5}})");
  const fs::path dir_a = fresh_dir("bytes_a");
  const fs::path dir_b = fresh_dir("bytes_b");

  ghz::spectrum_report(config, dir_a.string(), 2);
  ghz::spectrum_report(config, dir_b.string(), 2);
  CHECK(ghz::read_file((dir_a / "spectrum.csv").string()) ==
        ghz::read_file((dir_b / "spectrum.csv").string()));

  ghz::entropy_report(config, dir_a.string(), 2);
  ghz::entropy_report(config, dir_b.string(), 2);
  CHECK(ghz::read_file((dir_a / "entropy.csv").string()) ==
        ghz::read_file((dir_b / "entropy.csv").string()));

  ghz::quench_scan(config, {0.5, 1.0}, dir_a.string(), 2);
  ghz::quench_scan(config, {0.5, 1.0}, dir_b.string(), 2);
  CHECK(ghz::read_file((dir_a / "quench.csv").string()) ==
        ghz::read_file((dir_b / "quench.csv").string()));

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}
