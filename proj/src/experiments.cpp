#include "ghz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "ghz/errors.hpp"
#include "ghz/io.hpp"
#include "ghz/manifest.hpp"
#include "ghz/rng.hpp"
#include "json.hpp"

namespace ghz {

namespace {

using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Seed streams 0-4 are claimed by the optimizer and the noise ensemble.
constexpr std::uint64_t kCoherenceStream = 5;

constexpr const char* kTraceHeader =
    "iteration,omega_knot_1,omega_knot_2,omega_knot_3,"
    "delta_knot_1,delta_knot_2,delta_knot_3,value,best_so_far,init_phase";

// Collects the written files and assembles the manifest; config.json is
// echoed up front so even an interrupted run records what it was.
class RunDir {
 public:
  RunDir(const RunConfig& config, const std::string& dir, std::uint64_t seed)
      : dir_(dir) {
    ensure_directory(dir);
    manifest_.config_hash = config_hash(config);
    manifest_.seed = seed;
    manifest_.started_at = utc_timestamp();
    write("config.json", config_echo(config));
  }

  const std::string& dir() const { return dir_; }
  std::string path(const std::string& name) const { return dir_ + "/" + name; }

  void write(const std::string& name, const std::string& content) {
    write_file_atomic(path(name), content);
    names_.push_back(name);
  }

  // For files produced elsewhere (incremental CSVs).
  void track(const std::string& name) { names_.push_back(name); }

  void finish(const json& summary) {
    write("summary.json", summary.dump(2) + "\n");
    manifest_.finished_at = utc_timestamp();
    for (const auto& name : names_)
      manifest_.files.push_back({name, file_sha256(path(name))});
    write_manifest(dir_, manifest_);
  }

 private:
  std::string dir_;
  Manifest manifest_;
  std::vector<std::string> names_;
};

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += cells[i];
  }
  return row;
}

std::string format_trace_row(const TraceRow& row) {
  std::vector<std::string> cells;
  cells.push_back(std::to_string(row.iteration));
  for (int i = 0; i < row.params.size(); ++i)
    cells.push_back(format_double(row.params[i]));
  cells.push_back(format_double(row.value));
  cells.push_back(format_double(row.best_so_far));
  cells.push_back(row.init_phase ? "1" : "0");
  return csv_row(cells);
}

// Reads back rows from an earlier run of the same configuration; a trailing
// malformed line (interrupted write) ends the replay rather than failing it.
std::vector<TraceRow> load_trace_rows(const std::string& path, int d, int budget) {
  std::vector<TraceRow> rows;
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError&) {
    return rows;
  }
  std::size_t start = 0;
  bool header = true;
  while (start < text.size() && static_cast<int>(rows.size()) < budget) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) break;  // no trailing newline: torn line
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (header) {
      header = false;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != d + 4) break;
    try {
      TraceRow row;
      row.iteration = std::stoi(cells[0]);
      row.params.resize(d);
      for (int i = 0; i < d; ++i)
        row.params[i] = std::stod(cells[static_cast<std::size_t>(1 + i)]);
      row.value = std::stod(cells[static_cast<std::size_t>(d + 1)]);
      row.best_so_far = std::stod(cells[static_cast<std::size_t>(d + 2)]);
      row.init_phase = cells[static_cast<std::size_t>(d + 3)] == "1";
      if (row.iteration != static_cast<int>(rows.size())) break;
      rows.push_back(std::move(row));
    } catch (const std::exception&) {
      break;
    }
  }
  return rows;
}

StateVector as_state(int n_qubits, const Eigen::VectorXcd& amp) {
  StateVector state;
  state.n_qubits = n_qubits;
  state.amp = amp;
  return state;
}

struct GhzPopulations {
  double rho_aa = 0.0;
  double rho_bb = 0.0;
  double abs_rho_ab = 0.0;
};

GhzPopulations ghz_populations(const Eigen::VectorXcd& amp, const GhzTarget& target) {
  const std::complex<double> a = amp[static_cast<Eigen::Index>(target.alpha_index)];
  const std::complex<double> b = amp[static_cast<Eigen::Index>(target.beta_index)];
  return {std::norm(a), std::norm(b), std::abs(a * std::conj(b))};
}

void write_trajectory_csv(RunDir& run, const Trajectory& traj,
                          const GhzTarget& target) {
  std::string content =
      "time_us,fidelity,rho_alpha_alpha,rho_beta_beta,abs_rho_alpha_beta\n";
  for (std::size_t k = 0; k < traj.times_us.size(); ++k) {
    const GhzPopulations p = ghz_populations(traj.states[k], target);
    const double f = (p.rho_aa + p.rho_bb) / 2.0 + p.abs_rho_ab;
    content += csv_row({format_double(traj.times_us[k]), format_double(f),
                        format_double(p.rho_aa), format_double(p.rho_bb),
                        format_double(p.abs_rho_ab)});
    content += '\n';
  }
  run.write("trajectory.csv", content);
}

void write_pulse_csv(RunDir& run, const PulseShape& pulse) {
  constexpr int kSamples = 200;  // 201 rows including both endpoints
  std::string content = "time_us,omega_rad_per_us,delta_rad_per_us\n";
  for (int i = 0; i <= kSamples; ++i) {
    const double t = pulse.duration() * static_cast<double>(i) / kSamples;
    content += csv_row({format_double(t), format_double(pulse.omega(t)),
                        format_double(pulse.delta(t))});
    content += '\n';
  }
  run.write("pulse.csv", content);
}

double least_squares_slope(const std::vector<double>& t, const std::vector<double>& y,
                           double t_lo, double t_hi) {
  double st = 0.0, sy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_lo && t[i] <= t_hi) {
      st += t[i];
      sy += y[i];
      ++n;
    }
  if (n < 2) return 0.0;
  const double mt = st / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_lo && t[i] <= t_hi) {
      num += (t[i] - mt) * (y[i] - my);
      den += (t[i] - mt) * (t[i] - mt);
    }
  return den > 0.0 ? num / den : 0.0;
}

json params_json(const PulseParams& params) {
  return {{"omega_knots", params.omega_knots},
          {"delta_knots", params.delta_knots},
          {"duration_us", params.duration_us}};
}

}  // namespace

Workspace make_workspace(const RunConfig& config) {
  config.validate();
  Workspace w;
  const InteractionTable table =
      interaction_matrix(build_positions(config.lattice), config.lattice.c6_hz_m6);
  w.terms = build_hamiltonian(table);
  w.target = config.make_target();
  w.v0_rad_per_us = table.v0 * hz_to_rad_per_us;
  const std::uint64_t full = (std::uint64_t{1} << config.lattice.n_sites()) - 1;
  w.delta_star = find_crossing(w.terms, 0, full);
  const double center = config.search.delta_center_factor * w.delta_star;
  const double span = config.search.delta_span_factor * std::abs(w.delta_star);
  w.space.lower.resize(6);
  w.space.upper.resize(6);
  for (int i = 0; i < 3; ++i) {
    w.space.lower[i] = 0.0;
    w.space.upper[i] = config.search.omega_max_factor * w.v0_rad_per_us;
    w.space.lower[3 + i] = center - span;
    w.space.upper[3 + i] = center + span;
  }
  w.space.validate();
  return w;
}

PulseParams params_from_vector(const Eigen::VectorXd& raw, double duration_us) {
  if (raw.size() != 6)
    throw DomainError("params_from_vector: expected 6 parameters");
  PulseParams params;
  for (int i = 0; i < 3; ++i) {
    params.omega_knots[static_cast<std::size_t>(i)] = raw[i];
    params.delta_knots[static_cast<std::size_t>(i)] = raw[3 + i];
  }
  params.duration_us = duration_us;
  return params;
}

PulseShape pulse_from_config(const RunConfig& config) {
  if (!config.pulse)
    throw ConfigError("pulse: this command needs an explicit pulse section");
  PulseParams params;
  params.omega_knots = config.pulse->omega_knots;
  params.delta_knots = config.pulse->delta_knots;
  params.duration_us = config.duration_us;
  return spline_pulse(params);
}

OptimizeOutcome optimize_ghz(const RunConfig& config, const std::string& out_dir,
                             std::uint64_t seed) {
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();

  EvolveSettings objective_settings = config.evolve;
  objective_settings.record_stride = 0;

  const Objective objective = [&](const Eigen::VectorXd& raw) {
    const PulseShape pulse =
        spline_pulse(params_from_vector(raw, config.duration_us));
    if (config.noise) {
      NoiseSpec spec;
      spec.level = config.noise->level;
      spec.n_members = config.noise->n_members;
      return ensemble_fidelity(w.terms, pulse, w.target, spec, objective_settings,
                               seed)
          .mean_fidelity;
    }
    const Trajectory traj = evolve(w.terms, pulse, objective_settings,
                                   StateVector::all_down(n));
    return fidelity(as_state(n, traj.final_state()), w.target);
  };

  // Rows already on disk (from an interrupted or finished earlier run of the
  // same directory) are replayed instead of re-evaluated.
  const std::string trace_path = out_dir + "/trace.csv";
  std::vector<TraceRow> resume =
      load_trace_rows(trace_path + ".partial", 6, config.bo.budget);
  if (resume.empty()) resume = load_trace_rows(trace_path, 6, config.bo.budget);

  RunDir run(config, out_dir, seed);
  IncrementalCsv trace_csv(trace_path, kTraceHeader);
  for (const TraceRow& row : resume) trace_csv.append_row(format_trace_row(row));

  BoOptions options;
  options.budget = config.bo.budget;
  options.n_init = config.bo.n_init;
  options.fit_every = config.bo.fit_every;
  options.fit_restarts = config.bo.fit_restarts;
  options.on_row = [&](const TraceRow& row) {
    trace_csv.append_row(format_trace_row(row));
  };

  OptimizeOutcome outcome;
  outcome.trace = run_bo(objective, w.space, seed, options, resume);
  trace_csv.finalize();
  run.track("trace.csv");

  outcome.best_params = params_from_vector(outcome.trace.best_params,
                                           config.duration_us);
  outcome.best_value = outcome.trace.best_value;

  const PulseShape best_pulse = spline_pulse(outcome.best_params);
  outcome.trajectory =
      evolve(w.terms, best_pulse, config.evolve, StateVector::all_down(n));
  outcome.noiseless_fidelity =
      fidelity(as_state(n, outcome.trajectory.final_state()), w.target);

  write_trajectory_csv(run, outcome.trajectory, w.target);
  write_pulse_csv(run, best_pulse);

  json summary;
  summary["command"] = "optimize";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["n_evaluations"] = static_cast<int>(outcome.trace.rows.size());
  summary["best_value"] = outcome.best_value;
  summary["noiseless_fidelity"] = outcome.noiseless_fidelity;
  summary["best_params"] = params_json(outcome.best_params);
  summary["search_lower"] = std::vector<double>(w.space.lower.begin(), w.space.lower.end());
  summary["search_upper"] = std::vector<double>(w.space.upper.begin(), w.space.upper.end());
  summary["v0_rad_per_us"] = w.v0_rad_per_us;
  summary["delta_star_rad_per_us"] = w.delta_star;
  if (config.noise)
    summary["noise"] = {{"level", config.noise->level},
                        {"n_members", config.noise->n_members}};
  run.finish(summary);
  return outcome;
}

std::vector<double> default_g_values() {
  std::vector<double> g;
  for (int i = 2; i <= 20; ++i) g.push_back(0.1 * i);
  return g;
}

QuenchOutcome quench_scan(const RunConfig& config,
                          const std::vector<double>& g_values,
                          const std::string& out_dir, std::uint64_t seed) {
  if (g_values.empty())
    throw DomainError("quench_scan: need at least one g value");
  for (double g : g_values)
    if (!(g > 0.0) || !std::isfinite(g))
      throw DomainError("quench_scan: g values must be positive");

  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();
  const double delta = config.quench.delta_factor * w.delta_star;

  EvolveSettings settings = config.evolve;
  settings.record_stride = 0;

  RunDir run(config, out_dir, seed);
  QuenchOutcome outcome;
  std::string content = "g,omega_rad_per_us,delta_rad_per_us,fidelity\n";
  for (double g : g_values) {
    QuenchProfile profile;
    profile.omega1 = g * w.v0_rad_per_us;
    profile.omega2 = g * w.v0_rad_per_us;
    profile.duration_us = config.duration_us;
    profile.ramp_start = config.quench.ramp_start;
    profile.ramp_end = config.quench.ramp_end;
    const PulseShape pulse = quench_pulse(profile, delta);
    const Trajectory traj =
        evolve(w.terms, pulse, settings, StateVector::all_down(n));
    QuenchRow row;
    row.g = g;
    row.omega_rad_per_us = profile.omega1;
    row.delta_rad_per_us = delta;
    row.fidelity = fidelity(as_state(n, traj.final_state()), w.target);
    outcome.rows.push_back(row);
    content += csv_row({format_double(row.g), format_double(row.omega_rad_per_us),
                        format_double(row.delta_rad_per_us),
                        format_double(row.fidelity)});
    content += '\n';
  }
  run.write("quench.csv", content);

  outcome.argmax = 0;
  for (std::size_t i = 1; i < outcome.rows.size(); ++i)
    if (outcome.rows[i].fidelity > outcome.rows[outcome.argmax].fidelity)
      outcome.argmax = static_cast<int>(i);

  json summary;
  summary["command"] = "quench-scan";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["delta_rad_per_us"] = delta;
  summary["n_points"] = static_cast<int>(outcome.rows.size());
  summary["argmax_g"] = outcome.rows[static_cast<std::size_t>(outcome.argmax)].g;
  summary["max_fidelity"] =
      outcome.rows[static_cast<std::size_t>(outcome.argmax)].fidelity;
  run.finish(summary);
  return outcome;
}

SpectrumOutcome spectrum_report(const RunConfig& config, const std::string& out_dir,
                                std::uint64_t seed) {
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();
  const PulseShape pulse = pulse_from_config(config);

  RunDir run(config, out_dir, seed);
  SpectrumOutcome outcome;

  if (config.spectrum.snapshots == 1) {
    const StateVector initial = StateVector::all_down(n);
    outcome.snapshots.push_back(instantaneous_spectrum(
        w.terms, pulse.omega(0.0), pulse.delta(0.0), initial, 0.0));
  } else {
    EvolveSettings settings = config.evolve;
    settings.record_stride =
        (config.evolve.n_steps + config.spectrum.snapshots - 2) /
        (config.spectrum.snapshots - 1);
    const Trajectory traj =
        evolve(w.terms, pulse, settings, StateVector::all_down(n));
    for (std::size_t k = 0; k < traj.times_us.size(); ++k) {
      const double t = traj.times_us[k];
      // The last recorded time can overshoot T by an ulp of rounding.
      const double t_pulse = std::clamp(t, 0.0, pulse.duration());
      outcome.snapshots.push_back(
          instantaneous_spectrum(w.terms, pulse.omega(t_pulse), pulse.delta(t_pulse),
                                 as_state(n, traj.states[k]), t));
    }
  }

  std::string content = "time_us,level,energy_rad_per_us,magnetization,population\n";
  for (const SpectrumSnapshot& snap : outcome.snapshots)
    for (Eigen::Index k = 0; k < snap.eigenvalues.size(); ++k) {
      content += csv_row({format_double(snap.time_us), std::to_string(k),
                          format_double(snap.eigenvalues[k]),
                          format_double(snap.magnetizations[k]),
                          format_double(snap.populations[k])});
      content += '\n';
    }
  run.write("spectrum.csv", content);

  json summary;
  summary["command"] = "spectrum";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["n_snapshots"] = static_cast<int>(outcome.snapshots.size());
  summary["dim"] = static_cast<int>(outcome.snapshots.front().eigenvalues.size());
  run.finish(summary);
  return outcome;
}

EntropyOutcome entropy_report(const RunConfig& config, const std::string& out_dir,
                              std::uint64_t seed) {
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();
  const PulseShape pulse = pulse_from_config(config);

  EntropyOutcome outcome;
  outcome.partitions = config.effective_partitions();
  if (outcome.partitions.empty())
    throw ConfigError("entropy.partitions: no valid partitions for this lattice");

  EvolveSettings settings = config.evolve;
  if (settings.record_stride == 0) settings.record_stride = 10;
  const Trajectory traj = evolve(w.terms, pulse, settings, StateVector::all_down(n));

  outcome.times_us = traj.times_us;
  const auto n_times = static_cast<Eigen::Index>(traj.times_us.size());
  const auto n_parts = static_cast<Eigen::Index>(outcome.partitions.size());
  outcome.entropies.resize(n_times, n_parts);
  for (Eigen::Index k = 0; k < n_times; ++k) {
    const StateVector state = as_state(n, traj.states[static_cast<std::size_t>(k)]);
    for (Eigen::Index p = 0; p < n_parts; ++p)
      outcome.entropies(k, p) = entanglement_entropy(
          state, outcome.partitions[static_cast<std::size_t>(p)]);
  }

  const double t_lo = 0.1 * config.duration_us;
  const double t_hi = 0.4 * config.duration_us;
  for (Eigen::Index p = 0; p < n_parts; ++p) {
    std::vector<double> series(static_cast<std::size_t>(n_times));
    for (Eigen::Index k = 0; k < n_times; ++k)
      series[static_cast<std::size_t>(k)] = outcome.entropies(k, p);
    outcome.slopes.push_back(
        least_squares_slope(outcome.times_us, series, t_lo, t_hi));
    outcome.finals.push_back(outcome.entropies(n_times - 1, p));
  }

  RunDir run(config, out_dir, seed);
  std::string content = "time_us,partition,entropy_bits\n";
  for (Eigen::Index k = 0; k < n_times; ++k)
    for (Eigen::Index p = 0; p < n_parts; ++p) {
      content += csv_row({format_double(outcome.times_us[static_cast<std::size_t>(k)]),
                          std::to_string(p), format_double(outcome.entropies(k, p))});
      content += '\n';
    }
  run.write("entropy.csv", content);

  json summary;
  summary["command"] = "entropy";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["partitions"] = outcome.partitions;
  summary["slope_window_us"] = {t_lo, t_hi};
  summary["ballistic_slopes_bits_per_us"] = outcome.slopes;
  summary["final_entropies_bits"] = outcome.finals;
  run.finish(summary);
  return outcome;
}

LevelOutcome level_diagram_report(const RunConfig& config, const std::string& out_dir,
                                  std::uint64_t seed) {
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  const std::uint64_t neel = neel_bitmask(config.lattice);

  std::vector<double> grid;
  for (int i = 0; i < config.levels.points; ++i) {
    const double f = config.levels.delta_min_factor +
                     (config.levels.delta_max_factor - config.levels.delta_min_factor) *
                         static_cast<double>(i) / (config.levels.points - 1);
    grid.push_back(f * w.delta_star);
  }

  LevelOutcome outcome;
  outcome.diagram = level_diagram(w.terms, grid);

  const std::set<std::uint64_t> components = {0, full, neel, full ^ neel};
  if (n <= 10) {
    for (std::uint64_t b = 0; b <= full; ++b) outcome.written.push_back(b);
  } else {
    // Only the lines that can pick up population perturbatively, within two
    // spin flips of a component state, go to disk.
    std::set<std::uint64_t> keep(components);
    for (std::uint64_t c : components)
      for (int i = 0; i < n; ++i) {
        keep.insert(c ^ (std::uint64_t{1} << i));
        for (int j = i + 1; j < n; ++j)
          keep.insert(c ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j));
      }
    outcome.written.assign(keep.begin(), keep.end());
  }

  outcome.phi.exists = true;
  outcome.phi.delta_star = w.delta_star;
  try {
    outcome.psi.delta_star = find_crossing(w.terms, neel, full ^ neel);
    outcome.psi.exists = true;
  } catch (const DomainError&) {
    outcome.psi.exists = false;  // parallel lines: equal magnetization
  }

  RunDir run(config, out_dir, seed);
  std::string content =
      "basis_index,is_component,slope,intercept,delta_rad_per_us,energy_rad_per_us\n";
  for (std::uint64_t b : outcome.written) {
    const LevelLine& line = outcome.diagram.lines[b];
    const bool is_component = components.count(b) > 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      content += csv_row({std::to_string(b), is_component ? "1" : "0",
                          format_double(line.slope), format_double(line.intercept),
                          format_double(grid[g]),
                          format_double(outcome.diagram.energies(
                              static_cast<Eigen::Index>(b),
                              static_cast<Eigen::Index>(g)))});
      content += '\n';
    }
  }
  run.write("levels.csv", content);

  json summary;
  summary["command"] = "level-diagram";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["delta_star_rad_per_us"] = w.delta_star;
  summary["n_lines_written"] = static_cast<int>(outcome.written.size());
  summary["restricted"] = n > 10;
  summary["phi_crossing"] = {{"exists", true},
                             {"delta_star_rad_per_us", outcome.phi.delta_star}};
  if (outcome.psi.exists)
    summary["psi_crossing"] = {{"exists", true},
                               {"delta_star_rad_per_us", outcome.psi.delta_star}};
  else
    summary["psi_crossing"] = {{"exists", false},
                               {"reason", "parallel lines (equal magnetization)"}};
  run.finish(summary);
  return outcome;
}

EvolveOutcome evolve_report(const RunConfig& config, const std::string& out_dir,
                            std::uint64_t seed) {
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();
  const PulseShape pulse = pulse_from_config(config);

  RunDir run(config, out_dir, seed);
  EvolveOutcome outcome;
  outcome.trajectory = evolve(w.terms, pulse, config.evolve, StateVector::all_down(n));
  outcome.final_fidelity =
      fidelity(as_state(n, outcome.trajectory.final_state()), w.target);

  write_trajectory_csv(run, outcome.trajectory, w.target);
  write_pulse_csv(run, pulse);

  json summary;
  summary["command"] = "evolve";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["final_fidelity"] = outcome.final_fidelity;
  summary["matvecs"] = outcome.trajectory.stats.matvecs;
  summary["substeps"] = outcome.trajectory.stats.substeps;
  summary["max_krylov_dim"] = outcome.trajectory.stats.max_krylov_dim;
  run.finish(summary);
  return outcome;
}

NoiseEvalOutcome noise_eval(const RunConfig& config, const std::string& out_dir,
                            std::uint64_t seed) {
  if (!config.noise)
    throw ConfigError("noise: this command needs a noise section");
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();
  const PulseShape pulse = pulse_from_config(config);

  NoiseSpec spec;
  spec.level = config.noise->level;
  spec.n_members = config.noise->n_members;

  EvolveSettings settings = config.evolve;
  settings.record_stride = 0;

  RunDir run(config, out_dir, seed);
  NoiseEvalOutcome outcome;
  outcome.ensemble =
      ensemble_fidelity(w.terms, pulse, w.target, spec, settings, seed);
  const Trajectory clean = evolve(w.terms, pulse, settings, StateVector::all_down(n));
  outcome.noiseless_fidelity = fidelity(as_state(n, clean.final_state()), w.target);

  std::string content = "member,epsilon_omega,epsilon_delta,fidelity,failed\n";
  for (std::size_t m = 0; m < outcome.ensemble.member_fidelities.size(); ++m) {
    content += csv_row({std::to_string(m),
                        format_double(outcome.ensemble.epsilon_omega[m]),
                        format_double(outcome.ensemble.epsilon_delta[m]),
                        format_double(outcome.ensemble.member_fidelities[m]),
                        outcome.ensemble.failed[m] ? "1" : "0"});
    content += '\n';
  }
  run.write("ensemble.csv", content);

  int n_failed = 0;
  for (std::uint8_t f : outcome.ensemble.failed) n_failed += f;

  json summary;
  summary["command"] = "noise-eval";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["level"] = spec.level;
  summary["n_members"] = spec.n_members;
  summary["mean_fidelity"] = outcome.ensemble.mean_fidelity;
  summary["variance"] = outcome.ensemble.variance;
  summary["noiseless_fidelity"] = outcome.noiseless_fidelity;
  summary["n_failed"] = n_failed;
  run.finish(summary);
  return outcome;
}

CoherenceOutcome coherence_bound_report(const RunConfig& config, int n_trials,
                                        const std::string& out_dir,
                                        std::uint64_t seed) {
  if (n_trials < 1)
    throw DomainError("coherence_bound_report: need at least one trial");
  Workspace w = make_workspace(config);
  const int n = config.lattice.n_sites();

  EvolveSettings settings = config.evolve;
  settings.record_stride = 0;

  RunDir run(config, out_dir, seed);
  CoherenceOutcome outcome;
  outcome.max_violation = -std::numeric_limits<double>::infinity();

  std::string content =
      "trial,theta,phase,s_alpha_ti,s_beta_ti,s_alpha_tf,s_beta_tf,"
      "bound,coherence_min,true_coherence\n";
  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng(derive_seed(seed, kCoherenceStream, static_cast<std::uint64_t>(trial)));
    Eigen::VectorXd raw(6);
    for (int i = 0; i < 6; ++i)
      raw[i] = rng.uniform(w.space.lower[i], w.space.upper[i]);
    const double theta = rng.uniform(0.0, kPi);
    const double phase = rng.uniform(-kPi, kPi);

    const PulseShape pulse =
        spline_pulse(params_from_vector(raw, config.duration_us));
    const Trajectory traj = evolve(w.terms, pulse, settings, StateVector::all_down(n));
    const RamseyResult result = ramsey_bound_from_state(
        as_state(n, traj.final_state()), w.target, theta, phase);

    CoherenceTrial row;
    row.trial = trial;
    row.theta = theta;
    row.phase = phase;
    row.result = result;
    outcome.trials.push_back(row);
    outcome.max_violation =
        std::max(outcome.max_violation,
                 result.bound - 2.0 * result.true_coherence * result.true_coherence);

    content += csv_row({std::to_string(trial), format_double(theta),
                        format_double(phase), format_double(result.at_ti.s_alpha),
                        format_double(result.at_ti.s_beta),
                        format_double(result.at_tf.s_alpha),
                        format_double(result.at_tf.s_beta),
                        format_double(result.bound),
                        format_double(result.coherence_min),
                        format_double(result.true_coherence)});
    content += '\n';
  }
  run.write("bounds.csv", content);

  int n_positive = 0;
  for (const CoherenceTrial& trial : outcome.trials)
    if (trial.result.bound > 0.0) ++n_positive;

  json summary;
  summary["command"] = "coherence-bound";
  summary["target"] = target_name(config.target);
  summary["seed"] = seed;
  summary["n_trials"] = n_trials;
  summary["n_positive_bounds"] = n_positive;
  summary["max_violation"] = outcome.max_violation;
  run.finish(summary);
  return outcome;
}

}  // namespace ghz
