#include "vcm/config.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "vcm/io.hpp"

namespace vcm {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name",
      "dictionary.kind",
      "dictionary.p",
      "truth.s",
      "truth.s0",
      "truth.r",
      "truth.nu",
      "truth.C_a",
      "truth.L_gen",
      "noise.kind",
      "noise.K",
      "sigma",
      "n_grid",
      "replicates",
      "seed",
      "basis.kind",
      "basis.L",
      "penalty.mu",
      "penalty.h",
      "penalty.C_omega",
      "penalty.delta_multiplier",
      "solver.max_iters",
      "solver.rel_tol",
      "solver.backtrack",
      "solver.restart",
      "time.tilt",
      "kappa",
      "threads",
  };
  return keys;
}

const std::set<std::string>& required_keys() {
  static const std::set<std::string> keys = {
      "dictionary.kind", "dictionary.p", "truth.s", "truth.s0",
      "truth.r",         "truth.nu",     "sigma",   "n_grid",
  };
  return keys;
}

std::string get_or(const ConfigMap& cfg, const std::string& key,
                   const std::string& fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "' has bad numeric value '" +
                                value + "'");
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "' has bad integer value '" +
                                value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw std::invalid_argument("config: key '" + key + "' has bad boolean value '" +
                              value + "'");
}

}  // namespace

std::string dictionary_kind_name(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::Gaussian: return "gaussian";
    case DictionaryKind::SymmetricBernoulli: return "bernoulli";
    case DictionaryKind::OrthonormalCanonical: return "canonical";
  }
  return "gaussian";
}

std::string noise_kind_name(NoiseKind kind) {
  return kind == NoiseKind::Gaussian ? "gaussian" : "rademacher";
}

std::string basis_kind_name(BasisKind kind) {
  return kind == BasisKind::Fourier ? "fourier" : "haar";
}

DictionaryKind dictionary_kind_from(const std::string& name) {
  if (name == "gaussian") return DictionaryKind::Gaussian;
  if (name == "bernoulli") return DictionaryKind::SymmetricBernoulli;
  if (name == "canonical") return DictionaryKind::OrthonormalCanonical;
  throw std::invalid_argument("config: unknown dictionary kind '" + name + "'");
}

NoiseKind noise_kind_from(const std::string& name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "rademacher") return NoiseKind::Rademacher;
  throw std::invalid_argument("config: unknown noise kind '" + name + "'");
}

BasisKind basis_kind_from(const std::string& name) {
  if (name == "fourier") return BasisKind::Fourier;
  if (name == "haar") return BasisKind::PeriodicHaar;
  throw std::invalid_argument("config: unknown basis kind '" + name + "'");
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap cfg;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
    if (cfg.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    cfg[key] = value;
  }
  return cfg;
}

ExperimentPlan plan_from_config(const ConfigMap& cfg) {
  for (const auto& [key, value] : cfg)
    if (!known_keys().count(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  for (const auto& key : required_keys())
    if (!cfg.count(key))
      throw std::invalid_argument("config: missing required key '" + key + "'");

  ExperimentPlan plan;
  plan.name = get_or(cfg, "name", "plan");
  plan.dictionary.kind = dictionary_kind_from(cfg.at("dictionary.kind"));
  plan.dictionary.p = static_cast<int>(to_long("dictionary.p", cfg.at("dictionary.p")));

  const int s = static_cast<int>(to_long("truth.s", cfg.at("truth.s")));
  const int s0 = static_cast<int>(to_long("truth.s0", cfg.at("truth.s0")));
  plan.truth.p = plan.dictionary.p;
  plan.truth.c_a = to_double("truth.C_a", get_or(cfg, "truth.C_a", "1"));
  plan.truth.L_gen = static_cast<int>(to_long("truth.L_gen", get_or(cfg, "truth.L_gen", "0")));
  const SmoothnessSpec sm{to_double("truth.nu", cfg.at("truth.nu")),
                          to_double("truth.r", cfg.at("truth.r"))};
  for (int j = 0; j < s; ++j) {
    plan.truth.varying_indices.push_back(j);
    plan.truth.smoothness.push_back(sm);
  }
  for (int j = 0; j < s0; ++j) plan.truth.constant_indices.push_back(s + j);

  plan.noise.kind = noise_kind_from(get_or(cfg, "noise.kind", "gaussian"));
  plan.noise.K = to_double("noise.K", get_or(cfg, "noise.K", "1"));
  plan.sigma = to_double("sigma", cfg.at("sigma"));

  {
    std::istringstream gs(cfg.at("n_grid"));
    std::string tok;
    while (std::getline(gs, tok, ','))
      plan.n_grid.push_back(to_long("n_grid", trim(tok)));
  }
  plan.replicates = static_cast<int>(to_long("replicates", get_or(cfg, "replicates", "1")));
  plan.master_seed =
      static_cast<std::uint64_t>(std::stoull(get_or(cfg, "seed", "1")));
  plan.basis_kind = basis_kind_from(get_or(cfg, "basis.kind", "fourier"));
  plan.L_override = static_cast<int>(to_long("basis.L", get_or(cfg, "basis.L", "-1")));

  plan.penalty.mu = to_double("penalty.mu", get_or(cfg, "penalty.mu", "2"));
  plan.penalty.h = to_double("penalty.h", get_or(cfg, "penalty.h", "0.5"));
  plan.penalty.C_omega =
      to_double("penalty.C_omega", get_or(cfg, "penalty.C_omega", "1"));
  plan.penalty.delta_multiplier = to_double(
      "penalty.delta_multiplier", get_or(cfg, "penalty.delta_multiplier", "1"));

  plan.solver.max_iters = static_cast<int>(
      to_long("solver.max_iters", get_or(cfg, "solver.max_iters", "5000")));
  plan.solver.rel_tol =
      to_double("solver.rel_tol", get_or(cfg, "solver.rel_tol", "1e-08"));
  plan.solver.step_backtrack_factor =
      to_double("solver.backtrack", get_or(cfg, "solver.backtrack", "0.5"));
  plan.solver.restart = to_bool("solver.restart", get_or(cfg, "solver.restart", "1"));

  plan.time_tilt = to_double("time.tilt", get_or(cfg, "time.tilt", "0"));
  plan.kappa = to_double("kappa", get_or(cfg, "kappa", "0.1"));
  plan.threads = static_cast<int>(to_long("threads", get_or(cfg, "threads", "1")));

  plan.validate();
  return plan;
}

std::string manifest_text(const ExperimentPlan& plan) {
  std::string out;
  out += "name = " + plan.name + '\n';
  out += "dictionary.kind = " + dictionary_kind_name(plan.dictionary.kind) + '\n';
  out += "dictionary.p = " + std::to_string(plan.dictionary.p) + '\n';
  out += "truth.s = " + std::to_string(plan.truth.s()) + '\n';
  out += "truth.s0 = " + std::to_string(plan.truth.s0()) + '\n';
  const SmoothnessSpec sm =
      plan.truth.smoothness.empty() ? SmoothnessSpec{} : plan.truth.smoothness.front();
  out += "truth.r = " + fmt17(sm.r) + '\n';
  out += "truth.nu = " + fmt17(sm.nu) + '\n';
  out += "truth.C_a = " + fmt17(plan.truth.c_a) + '\n';
  out += "truth.L_gen = " + std::to_string(plan.truth.L_gen) + '\n';
  out += "noise.kind = " + noise_kind_name(plan.noise.kind) + '\n';
  out += "noise.K = " + fmt17(plan.noise.K) + '\n';
  out += "sigma = " + fmt17(plan.sigma) + '\n';
  std::string grid;
  for (long n : plan.n_grid) grid += (grid.empty() ? "" : ",") + std::to_string(n);
  out += "n_grid = " + grid + '\n';
  out += "replicates = " + std::to_string(plan.replicates) + '\n';
  out += "seed = " + std::to_string(plan.master_seed) + '\n';
  out += "basis.kind = " + basis_kind_name(plan.basis_kind) + '\n';
  out += "basis.L = " + std::to_string(plan.L_override) + '\n';
  out += "penalty.mu = " + fmt17(plan.penalty.mu) + '\n';
  out += "penalty.h = " + fmt17(plan.penalty.h) + '\n';
  out += "penalty.C_omega = " + fmt17(plan.penalty.C_omega) + '\n';
  out += "penalty.delta_multiplier = " + fmt17(plan.penalty.delta_multiplier) + '\n';
  out += "solver.max_iters = " + std::to_string(plan.solver.max_iters) + '\n';
  out += "solver.rel_tol = " + fmt17(plan.solver.rel_tol) + '\n';
  out += "solver.backtrack = " + fmt17(plan.solver.step_backtrack_factor) + '\n';
  out += "solver.restart = " + std::string(plan.solver.restart ? "1" : "0") + '\n';
  out += "time.tilt = " + fmt17(plan.time_tilt) + '\n';
  out += "kappa = " + fmt17(plan.kappa) + '\n';
  out += "threads = " + std::to_string(plan.threads) + '\n';
  return out;
}

}  // namespace vcm
