#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghz/config.hpp"
#include "ghz/errors.hpp"
#include "ghz/experiments.hpp"
#include "ghz/io.hpp"
#include "ghz/manifest.hpp"
#include "json.hpp"

namespace {

// "START:STOP:STEP" -> inclusive grid; the count is rounded so that decimal
// steps land exactly (0.2:2.0:0.1 gives 19 values).
std::vector<double> parse_g_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? 0 : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw ghz::ConfigError("--g: expected START:STOP:STEP (got \"" + text + "\")");
  double start = 0.0, stop = 0.0, step = 0.0;
  try {
    start = std::stod(text.substr(0, first));
    stop = std::stod(text.substr(first + 1, second - first - 1));
    step = std::stod(text.substr(second + 1));
  } catch (const std::exception&) {
    throw ghz::ConfigError("--g: expected numbers in START:STOP:STEP (got \"" +
                           text + "\")");
  }
  if (!(step > 0.0)) throw ghz::ConfigError("--g: STEP must be positive");
  if (stop < start) throw ghz::ConfigError("--g: STOP must not precede START");
  const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values;
  for (int i = 0; i < count; ++i) {
    double g = start + i * step;
    if (i == count - 1 && std::abs(g - stop) < step * 1e-6) g = stop;
    values.push_back(g);
  }
  return values;
}

int fail(const char* type, const std::string& message) {
  nlohmann::json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GHZ state preparation on Rydberg lattices: pulse optimization, "
               "quench scans, spectra, entropies, level diagrams, noise and "
               "coherence analyses"};
  app.set_version_flag("--version", ghz::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string g_range = "0.2:2.0:0.1";
  int trials = 100;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--out", out_dir, "output directory for the run artifacts")
        ->required();
    cmd->add_option("--seed", seed,
                    "master seed; every random draw derives from it");
    cmd->add_option("--threads", threads,
                    "worker cap (this build evaluates sequentially)");
    return cmd;
  };

  CLI::App* optimize = add_common(app.add_subcommand(
      "optimize", "Bayesian search for a GHZ preparation pulse"));
  CLI::App* evolve = add_common(app.add_subcommand(
      "evolve", "propagate the configured pulse and record the trajectory"));
  CLI::App* spectrum = add_common(app.add_subcommand(
      "spectrum", "instantaneous eigensystem along the configured pulse"));
  CLI::App* entropy = add_common(app.add_subcommand(
      "entropy", "bipartite entanglement entropy traces and growth slopes"));
  CLI::App* levels = add_common(app.add_subcommand(
      "level-diagram", "zero-drive level lines and component crossings"));
  CLI::App* quench = add_common(app.add_subcommand(
      "quench-scan", "GHZ fidelity of the quench drive versus g"));
  quench->add_option("--g", g_range, "g grid as START:STOP:STEP");
  CLI::App* coherence = add_common(app.add_subcommand(
      "coherence-bound", "two-point Ramsey lower bounds on random pulses"));
  coherence->add_option("--trials", trials, "number of random trials");
  CLI::App* noise = add_common(app.add_subcommand(
      "noise-eval", "ensemble fidelity of the configured pulse under noise"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    const ghz::RunConfig config = ghz::parse_config(config_path);
    if (app.got_subcommand(optimize)) {
      const ghz::OptimizeOutcome outcome =
          ghz::optimize_ghz(config, out_dir, seed);
      std::cout << "optimize: best objective "
                << ghz::format_double(outcome.best_value)
                << ", noiseless fidelity "
                << ghz::format_double(outcome.noiseless_fidelity) << ", "
                << outcome.trace.rows.size() << " evaluations -> " << out_dir
                << "\n";
    } else if (app.got_subcommand(evolve)) {
      const ghz::EvolveOutcome outcome = ghz::evolve_report(config, out_dir, seed);
      std::cout << "evolve: final fidelity "
                << ghz::format_double(outcome.final_fidelity) << " -> " << out_dir
                << "\n";
    } else if (app.got_subcommand(spectrum)) {
      const ghz::SpectrumOutcome outcome =
          ghz::spectrum_report(config, out_dir, seed);
      std::cout << "spectrum: " << outcome.snapshots.size() << " snapshots -> "
                << out_dir << "\n";
    } else if (app.got_subcommand(entropy)) {
      const ghz::EntropyOutcome outcome = ghz::entropy_report(config, out_dir, seed);
      std::cout << "entropy: " << outcome.partitions.size()
                << " partitions, final ";
      for (std::size_t p = 0; p < outcome.finals.size(); ++p)
        std::cout << (p > 0 ? ", " : "") << ghz::format_double(outcome.finals[p]);
      std::cout << " bits -> " << out_dir << "\n";
    } else if (app.got_subcommand(levels)) {
      const ghz::LevelOutcome outcome =
          ghz::level_diagram_report(config, out_dir, seed);
      std::cout << "level-diagram: phi crossing at "
                << ghz::format_double(outcome.phi.delta_star) << " rad/us, psi "
                << (outcome.psi.exists ? "crossing found" : "pair parallel")
                << " -> " << out_dir << "\n";
    } else if (app.got_subcommand(quench)) {
      const std::vector<double> g_values = parse_g_range(g_range);
      const ghz::QuenchOutcome outcome =
          ghz::quench_scan(config, g_values, out_dir, seed);
      const ghz::QuenchRow& best =
          outcome.rows[static_cast<std::size_t>(outcome.argmax)];
      std::cout << "quench-scan: " << outcome.rows.size()
                << " points, best F = " << ghz::format_double(best.fidelity)
                << " at g = " << ghz::format_double(best.g) << " -> " << out_dir
                << "\n";
    } else if (app.got_subcommand(coherence)) {
      const ghz::CoherenceOutcome outcome =
          ghz::coherence_bound_report(config, trials, out_dir, seed);
      std::cout << "coherence-bound: " << outcome.trials.size()
                << " trials, max violation "
                << ghz::format_double(outcome.max_violation) << " -> " << out_dir
                << "\n";
    } else if (app.got_subcommand(noise)) {
      const ghz::NoiseEvalOutcome outcome = ghz::noise_eval(config, out_dir, seed);
      std::cout << "noise-eval: mean fidelity "
                << ghz::format_double(outcome.ensemble.mean_fidelity)
                << " (noiseless "
                << ghz::format_double(outcome.noiseless_fidelity) << ") -> "
                << out_dir << "\n";
    }
  } catch (const ghz::ConfigError& e) {
    return fail("config", e.what());
  } catch (const ghz::IoError& e) {
    return fail("io", e.what());
  } catch (const ghz::SpecError& e) {
    return fail("spec", e.what());
  } catch (const ghz::CapacityError& e) {
    return fail("capacity", e.what());
  } catch (const ghz::DomainError& e) {
    return fail("domain", e.what());
  } catch (const ghz::PropagationError& e) {
    return fail("propagation", e.what());
  } catch (const ghz::PartitionError& e) {
    return fail("partition", e.what());
  } catch (const ghz::FitError& e) {
    return fail("fit", e.what());
  } catch (const ghz::Error& e) {
    return fail("error", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
