#include "ghz/config.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "ghz/errors.hpp"
#include "ghz/io.hpp"
#include "json.hpp"

namespace ghz {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& problem) {
  throw ConfigError(key.empty() ? problem : key + ": " + problem);
}

void reject_unknown_keys(const json& obj, const std::string& scope,
                         const std::set<std::string>& known) {
  for (const auto& item : obj.items())
    if (known.count(item.key()) == 0)
      fail(scope, "unknown key \"" + item.key() + "\"");
}

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_double(const json& value, const std::string& key) {
  if (!value.is_number()) fail(key, "must be a number");
  return value.get<double>();
}

int get_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) fail(key, "must be an integer");
  return value.get<int>();
}

bool get_bool(const json& value, const std::string& key) {
  if (!value.is_boolean()) fail(key, "must be true or false");
  return value.get<bool>();
}

std::array<double, 3> get_knots(const json& value, const std::string& key) {
  if (!value.is_array() || value.size() != 3)
    fail(key, "must be an array of exactly 3 numbers");
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = get_double(value[static_cast<std::size_t>(i)], key);
  return out;
}

void parse_lattice(const json& value, LatticeSpec& spec) {
  if (value.is_array()) {
    if (value.empty() || value.size() > 3)
      fail("lattice", "extents must have 1 to 3 entries");
    spec.extents.clear();
    for (const auto& e : value) spec.extents.push_back(get_int(e, "lattice"));
    return;
  }
  if (!value.is_object())
    fail("lattice", "must be an extents array or an object");
  reject_unknown_keys(value, "lattice", {"extents", "spacing_um", "c6_hz_m6"});
  const json* extents = find(value, "extents");
  if (extents == nullptr) fail("lattice.extents", "required");
  if (!extents->is_array() || extents->empty() || extents->size() > 3)
    fail("lattice.extents", "must be an array of 1 to 3 integers");
  spec.extents.clear();
  for (const auto& e : *extents)
    spec.extents.push_back(get_int(e, "lattice.extents"));
  if (const json* v = find(value, "spacing_um"))
    spec.spacing_um = get_double(*v, "lattice.spacing_um");
  if (const json* v = find(value, "c6_hz_m6"))
    spec.c6_hz_m6 = get_double(*v, "lattice.c6_hz_m6");
}

void parse_evolve(const json& value, EvolveSettings& settings) {
  if (!value.is_object()) fail("evolve", "must be an object");
  reject_unknown_keys(value, "evolve",
                      {"n_steps", "krylov_tol", "krylov_dim_max",
                       "record_stride", "reorthogonalize"});
  if (const json* v = find(value, "n_steps"))
    settings.n_steps = get_int(*v, "evolve.n_steps");
  if (const json* v = find(value, "krylov_tol"))
    settings.krylov_tol = get_double(*v, "evolve.krylov_tol");
  if (const json* v = find(value, "krylov_dim_max"))
    settings.krylov_dim_max = get_int(*v, "evolve.krylov_dim_max");
  if (const json* v = find(value, "record_stride"))
    settings.record_stride = get_int(*v, "evolve.record_stride");
  if (const json* v = find(value, "reorthogonalize"))
    settings.reorthogonalize = get_bool(*v, "evolve.reorthogonalize");
}

void parse_search(const json& value, SearchConfig& search) {
  if (!value.is_object()) fail("search", "must be an object");
  reject_unknown_keys(value, "search",
                      {"omega_max_factor", "delta_span_factor",
                       "delta_center_factor"});
  if (const json* v = find(value, "omega_max_factor"))
    search.omega_max_factor = get_double(*v, "search.omega_max_factor");
  if (const json* v = find(value, "delta_span_factor"))
    search.delta_span_factor = get_double(*v, "search.delta_span_factor");
  if (const json* v = find(value, "delta_center_factor"))
    search.delta_center_factor = get_double(*v, "search.delta_center_factor");
}

void parse_bo(const json& value, BoConfig& bo) {
  if (!value.is_object()) fail("bo", "must be an object");
  reject_unknown_keys(value, "bo",
                      {"budget", "n_init", "fit_every", "fit_restarts"});
  if (const json* v = find(value, "budget")) bo.budget = get_int(*v, "bo.budget");
  if (const json* v = find(value, "n_init")) bo.n_init = get_int(*v, "bo.n_init");
  if (const json* v = find(value, "fit_every"))
    bo.fit_every = get_int(*v, "bo.fit_every");
  if (const json* v = find(value, "fit_restarts"))
    bo.fit_restarts = get_int(*v, "bo.fit_restarts");
}

void parse_noise(const json& value, NoiseConfig& noise) {
  if (!value.is_object()) fail("noise", "must be an object");
  reject_unknown_keys(value, "noise", {"level", "n_members"});
  if (const json* v = find(value, "level"))
    noise.level = get_double(*v, "noise.level");
  if (const json* v = find(value, "n_members"))
    noise.n_members = get_int(*v, "noise.n_members");
}

void parse_pulse(const json& value, PulseConfig& pulse) {
  if (!value.is_object()) fail("pulse", "must be an object");
  reject_unknown_keys(value, "pulse", {"omega_knots", "delta_knots"});
  const json* omega = find(value, "omega_knots");
  const json* delta = find(value, "delta_knots");
  if (omega != nullptr) pulse.omega_knots = get_knots(*omega, "pulse.omega_knots");
  if (delta != nullptr) pulse.delta_knots = get_knots(*delta, "pulse.delta_knots");
  if (omega == nullptr) fail("pulse.omega_knots", "required");
  if (delta == nullptr) fail("pulse.delta_knots", "required");
}

void parse_quench(const json& value, QuenchConfig& quench) {
  if (!value.is_object()) fail("quench", "must be an object");
  reject_unknown_keys(value, "quench",
                      {"delta_factor", "ramp_start", "ramp_end"});
  if (const json* v = find(value, "delta_factor"))
    quench.delta_factor = get_double(*v, "quench.delta_factor");
  if (const json* v = find(value, "ramp_start"))
    quench.ramp_start = get_double(*v, "quench.ramp_start");
  if (const json* v = find(value, "ramp_end"))
    quench.ramp_end = get_double(*v, "quench.ramp_end");
}

void parse_spectrum(const json& value, SpectrumConfig& spectrum) {
  if (!value.is_object()) fail("spectrum", "must be an object");
  reject_unknown_keys(value, "spectrum", {"snapshots"});
  if (const json* v = find(value, "snapshots"))
    spectrum.snapshots = get_int(*v, "spectrum.snapshots");
}

void parse_entropy(const json& value, EntropyConfig& entropy) {
  if (!value.is_object()) fail("entropy", "must be an object");
  reject_unknown_keys(value, "entropy", {"partitions"});
  if (const json* v = find(value, "partitions")) {
    if (!v->is_array()) fail("entropy.partitions", "must be an array of arrays");
    entropy.partitions.clear();
    for (const auto& part : *v) {
      if (!part.is_array() || part.empty())
        fail("entropy.partitions", "each partition must be a nonempty array");
      std::vector<int> sites;
      for (const auto& s : part)
        sites.push_back(get_int(s, "entropy.partitions"));
      entropy.partitions.push_back(std::move(sites));
    }
  }
}

void parse_levels(const json& value, LevelsConfig& levels) {
  if (!value.is_object()) fail("levels", "must be an object");
  reject_unknown_keys(value, "levels",
                      {"points", "delta_min_factor", "delta_max_factor"});
  if (const json* v = find(value, "points"))
    levels.points = get_int(*v, "levels.points");
  if (const json* v = find(value, "delta_min_factor"))
    levels.delta_min_factor = get_double(*v, "levels.delta_min_factor");
  if (const json* v = find(value, "delta_max_factor"))
    levels.delta_max_factor = get_double(*v, "levels.delta_max_factor");
}

void check_positive_int(int value, const char* key, int minimum = 1) {
  if (value < minimum)
    fail(key, "must be at least " + std::to_string(minimum) + " (got " +
                  std::to_string(value) + ")");
}

void check_positive(double value, const char* key) {
  if (!(value > 0.0) || !std::isfinite(value))
    fail(key, "must be a positive number (got " + format_double(value) + ")");
}

void check_finite(double value, const char* key) {
  if (!std::isfinite(value)) fail(key, "must be finite");
}

}  // namespace

std::string target_name(TargetKind kind) {
  return kind == TargetKind::phi ? "phi" : "psi";
}

GhzTarget RunConfig::make_target() const {
  return target == TargetKind::phi ? ghz_phi_target(lattice.n_sites())
                                   : ghz_psi_target(lattice);
}

std::vector<std::vector<int>> RunConfig::effective_partitions() const {
  if (!entropy.partitions.empty()) return entropy.partitions;
  const int half = lattice.n_sites() / 2;
  if (half == 0) return {};
  std::vector<int> sites(static_cast<std::size_t>(half));
  std::iota(sites.begin(), sites.end(), 0);
  return {sites};
}

void RunConfig::validate() const {
  if (lattice.extents.empty() || lattice.extents.size() > 3)
    fail("lattice.extents", "must have 1 to 3 entries");
  for (int e : lattice.extents)
    if (e < 1) fail("lattice.extents", "entries must be at least 1");
  check_positive(lattice.spacing_um, "lattice.spacing_um");
  check_positive(lattice.c6_hz_m6, "lattice.c6_hz_m6");
  const int n = lattice.n_sites();
  if (n < 2) fail("lattice.extents", "need at least 2 atoms");
  if (n > kMaxQubits)
    fail("lattice.extents", "at most " + std::to_string(kMaxQubits) +
                                " atoms supported (got " + std::to_string(n) + ")");

  check_positive(duration_us, "duration_us");

  check_positive_int(evolve.n_steps, "evolve.n_steps");
  check_positive(evolve.krylov_tol, "evolve.krylov_tol");
  check_positive_int(evolve.krylov_dim_max, "evolve.krylov_dim_max", 2);
  if (evolve.record_stride < 0)
    fail("evolve.record_stride", "must be nonnegative");

  check_positive(search.omega_max_factor, "search.omega_max_factor");
  check_positive(search.delta_span_factor, "search.delta_span_factor");
  check_finite(search.delta_center_factor, "search.delta_center_factor");

  check_positive_int(bo.budget, "bo.budget");
  check_positive_int(bo.n_init, "bo.n_init", 2);
  if (bo.n_init > bo.budget)
    fail("bo.n_init", "must not exceed bo.budget (got " +
                          std::to_string(bo.n_init) + " > " +
                          std::to_string(bo.budget) + ")");
  check_positive_int(bo.fit_every, "bo.fit_every");
  check_positive_int(bo.fit_restarts, "bo.fit_restarts");

  if (noise) {
    if (noise->level < 0.0 || !std::isfinite(noise->level))
      fail("noise.level", "must be a nonnegative number");
    check_positive_int(noise->n_members, "noise.n_members");
  }

  if (pulse) {
    for (double w : pulse->omega_knots)
      if (!(w >= 0.0) || !std::isfinite(w))
        fail("pulse.omega_knots", "entries must be nonnegative");
    for (double d : pulse->delta_knots) check_finite(d, "pulse.delta_knots");
  }

  check_finite(quench.delta_factor, "quench.delta_factor");
  if (!(quench.ramp_start >= 0.0 && quench.ramp_start <= quench.ramp_end &&
        quench.ramp_end <= 1.0))
    fail("quench.ramp_start",
         "need 0 <= ramp_start <= ramp_end <= 1 (got " +
             format_double(quench.ramp_start) + ", " +
             format_double(quench.ramp_end) + ")");

  if (spectrum.snapshots < 1 || spectrum.snapshots > 100)
    fail("spectrum.snapshots", "must be between 1 and 100 (got " +
                                   std::to_string(spectrum.snapshots) + ")");

  for (const auto& part : entropy.partitions) {
    if (part.empty())
      fail("entropy.partitions", "each partition must be nonempty");
    if (static_cast<int>(part.size()) >= n)
      fail("entropy.partitions", "a partition must keep fewer than all atoms");
    std::set<int> seen;
    for (int site : part) {
      if (site < 0 || site >= n)
        fail("entropy.partitions", "site " + std::to_string(site) +
                                       " outside the lattice (N = " +
                                       std::to_string(n) + ")");
      if (!seen.insert(site).second)
        fail("entropy.partitions", "duplicate site " + std::to_string(site));
    }
  }

  check_positive_int(levels.points, "levels.points", 2);
  check_finite(levels.delta_min_factor, "levels.delta_min_factor");
  check_finite(levels.delta_max_factor, "levels.delta_max_factor");
  if (!(levels.delta_min_factor < levels.delta_max_factor))
    fail("levels.delta_min_factor", "must be below levels.delta_max_factor");

  make_target().validate(n);
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(doc, "",
                      {"lattice", "n_atoms", "target", "duration_us", "evolve",
                       "search", "bo", "noise", "pulse", "quench", "spectrum",
                       "entropy", "levels"});

  RunConfig config;
  // Reports sample the trajectory; raw propagation defaults to endpoints only.
  config.evolve.record_stride = 10;

  const json* lattice = find(doc, "lattice");
  if (lattice == nullptr) fail("lattice", "required");
  parse_lattice(*lattice, config.lattice);

  if (const json* v = find(doc, "n_atoms")) {
    const int n_atoms = get_int(*v, "n_atoms");
    const int product = config.lattice.n_sites();
    if (n_atoms != product)
      fail("n_atoms", "does not match the lattice extents (extents give " +
                          std::to_string(product) + ", n_atoms says " +
                          std::to_string(n_atoms) + ")");
  }

  const json* target = find(doc, "target");
  if (target == nullptr) fail("target", "required");
  if (!target->is_string()) fail("target", "must be \"phi\" or \"psi\"");
  const std::string name = target->get<std::string>();
  if (name == "phi")
    config.target = TargetKind::phi;
  else if (name == "psi")
    config.target = TargetKind::psi;
  else
    fail("target", "must be \"phi\" or \"psi\" (got \"" + name + "\")");

  const json* duration = find(doc, "duration_us");
  if (duration == nullptr) fail("duration_us", "required");
  config.duration_us = get_double(*duration, "duration_us");

  if (const json* v = find(doc, "evolve")) parse_evolve(*v, config.evolve);
  if (const json* v = find(doc, "search")) parse_search(*v, config.search);
  if (const json* v = find(doc, "bo")) parse_bo(*v, config.bo);
  if (const json* v = find(doc, "noise")) {
    NoiseConfig noise;
    parse_noise(*v, noise);
    config.noise = noise;
  }
  if (const json* v = find(doc, "pulse")) {
    PulseConfig pulse;
    parse_pulse(*v, pulse);
    config.pulse = pulse;
  }
  if (const json* v = find(doc, "quench")) parse_quench(*v, config.quench);
  if (const json* v = find(doc, "spectrum")) parse_spectrum(*v, config.spectrum);
  if (const json* v = find(doc, "entropy")) parse_entropy(*v, config.entropy);
  if (const json* v = find(doc, "levels")) parse_levels(*v, config.levels);

  config.validate();
  return config;
}

RunConfig parse_config(const std::string& path) {
  return parse_config_text(read_file(path));
}

std::string config_echo(const RunConfig& config) {
  json doc;
  doc["lattice"] = {{"extents", config.lattice.extents},
                    {"spacing_um", config.lattice.spacing_um},
                    {"c6_hz_m6", config.lattice.c6_hz_m6}};
  doc["n_atoms"] = config.lattice.n_sites();
  doc["target"] = target_name(config.target);
  doc["duration_us"] = config.duration_us;
  doc["evolve"] = {{"n_steps", config.evolve.n_steps},
                   {"krylov_tol", config.evolve.krylov_tol},
                   {"krylov_dim_max", config.evolve.krylov_dim_max},
                   {"record_stride", config.evolve.record_stride},
                   {"reorthogonalize", config.evolve.reorthogonalize}};
  doc["search"] = {{"omega_max_factor", config.search.omega_max_factor},
                   {"delta_span_factor", config.search.delta_span_factor},
                   {"delta_center_factor", config.search.delta_center_factor}};
  doc["bo"] = {{"budget", config.bo.budget},
               {"n_init", config.bo.n_init},
               {"fit_every", config.bo.fit_every},
               {"fit_restarts", config.bo.fit_restarts}};
  if (config.noise)
    doc["noise"] = {{"level", config.noise->level},
                    {"n_members", config.noise->n_members}};
  if (config.pulse)
    doc["pulse"] = {{"omega_knots", config.pulse->omega_knots},
                    {"delta_knots", config.pulse->delta_knots}};
  doc["quench"] = {{"delta_factor", config.quench.delta_factor},
                   {"ramp_start", config.quench.ramp_start},
                   {"ramp_end", config.quench.ramp_end}};
  doc["spectrum"] = {{"snapshots", config.spectrum.snapshots}};
  doc["entropy"] = {{"partitions", config.entropy.partitions}};
  doc["levels"] = {{"points", config.levels.points},
                   {"delta_min_factor", config.levels.delta_min_factor},
                   {"delta_max_factor", config.levels.delta_max_factor}};
  return doc.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  return sha256_hex(config_echo(config));
}

}  // namespace ghz
