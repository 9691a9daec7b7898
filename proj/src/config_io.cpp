#include "lazysched/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lazysched/errors.hpp"

namespace lazysched {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::string& section,
                         std::initializer_list<const char*> known) {
  for (const auto& item : object.items()) {
    bool found = false;
    for (const char* key : known)
      if (item.key() == key) {
        found = true;
        break;
      }
    if (!found)
      throw ConfigError(section.empty() ? item.key() : section + "." + item.key(),
                        "unknown key");
  }
}

template <typename T>
void read_field(const json& object, const std::string& section,
                const char* key, T& out) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(section + "." + key, "wrong type");
  }
}

void parse_system(const json& object, SystemConfig& cfg) {
  reject_unknown_keys(object, "system",
                      {"horizon_slots", "slot_seconds", "bandwidth_hz",
                       "noise_density_w_per_hz", "rate_set_bits_per_slot",
                       "tau_slots", "alpha_slots", "beta",
                       "power_unit_watts"});
  read_field(object, "system", "horizon_slots", cfg.horizon_slots);
  read_field(object, "system", "slot_seconds", cfg.slot_seconds);
  read_field(object, "system", "bandwidth_hz", cfg.bandwidth_hz);
  read_field(object, "system", "noise_density_w_per_hz", cfg.noise_density);
  read_field(object, "system", "rate_set_bits_per_slot", cfg.rate_set);
  read_field(object, "system", "tau_slots", cfg.tau);
  read_field(object, "system", "alpha_slots", cfg.alpha);
  read_field(object, "system", "beta", cfg.beta);
  read_field(object, "system", "power_unit_watts", cfg.power_unit);
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError("system", e.what());
  }
}

void parse_arrivals(const json& object, ArrivalChain& chain) {
  reject_unknown_keys(object, "arrivals",
                      {"transition", "lengths_bits", "initial"});
  read_field(object, "arrivals", "transition", chain.transition);
  read_field(object, "arrivals", "lengths_bits", chain.lengths);
  if (object.contains("initial")) {
    const json& initial = object.at("initial");
    if (initial.is_string()) {
      if (initial.get<std::string>() != "stationary")
        throw ConfigError("arrivals.initial",
                          "string form must be \"stationary\"");
      chain.initial_distribution.clear();
    } else if (initial.is_number_integer()) {
      const int state = initial.get<int>();
      if (state < 0 || state >= chain.num_states())
        throw ConfigError("arrivals.initial", "state index out of range");
      chain.initial_distribution.assign(chain.num_states(), 0.0);
      chain.initial_distribution[state] = 1.0;
    } else if (initial.is_array()) {
      chain.initial_distribution = initial.get<std::vector<double>>();
    } else {
      throw ConfigError("arrivals.initial",
                        "must be \"stationary\", a state index, or a "
                        "distribution");
    }
  }
  try {
    chain.validate();
  } catch (const std::exception& e) {
    throw ConfigError("arrivals", e.what());
  }
}

void parse_harvest(const json& object, HarvestProcess& harvest) {
  reject_unknown_keys(object, "harvest",
                      {"kind", "amount", "p_event", "p_stay"});
  if (object.contains("kind")) {
    const std::string kind = object.at("kind").get<std::string>();
    if (kind == "bernoulli")
      harvest.kind = HarvestProcess::Kind::kBernoulli;
    else if (kind == "two_state_markov")
      harvest.kind = HarvestProcess::Kind::kTwoStateMarkov;
    else
      throw ConfigError("harvest.kind",
                        "must be \"bernoulli\" or \"two_state_markov\"");
  }
  read_field(object, "harvest", "amount", harvest.amount);
  read_field(object, "harvest", "p_event", harvest.p_event);
  read_field(object, "harvest", "p_stay", harvest.p_stay);
  try {
    harvest.validate();
  } catch (const std::exception& e) {
    throw ConfigError("harvest", e.what());
  }
}

void parse_fading(const json& object, FadingProcess& fading) {
  reject_unknown_keys(object, "fading", {"gains", "probabilities"});
  read_field(object, "fading", "gains", fading.gains);
  read_field(object, "fading", "probabilities", fading.probabilities);
  try {
    fading.validate();
  } catch (const std::exception& e) {
    throw ConfigError("fading", e.what());
  }
}

void parse_experiment(const json& object, ExperimentSpec& spec) {
  reject_unknown_keys(object, "experiment",
                      {"realizations", "seed", "initial_energy",
                       "initial_backlog", "etls_one_step",
                       "heuristic_iterations"});
  read_field(object, "experiment", "realizations", spec.realizations);
  read_field(object, "experiment", "seed", spec.seed);
  read_field(object, "experiment", "initial_energy", spec.initial_energy);
  read_field(object, "experiment", "initial_backlog", spec.initial_backlog);
  read_field(object, "experiment", "etls_one_step", spec.etls_one_step);
  read_field(object, "experiment", "heuristic_iterations",
             spec.heuristic_iterations);
  if (spec.realizations < 1)
    throw ConfigError("experiment.realizations", "must be >= 1");
  if (spec.heuristic_iterations < 1)
    throw ConfigError("experiment.heuristic_iterations", "must be >= 1");
  if (spec.initial_energy < 0)
    throw ConfigError("experiment.initial_energy", "must be >= 0");
  if (spec.initial_backlog < 0)
    throw ConfigError("experiment.initial_backlog", "must be >= 0");
}

}  // namespace

CliConfig default_cli_config() {
  CliConfig config;
  config.spec.config = default_system_config();
  config.spec.processes.arrivals.transition = {{0.9, 0.1}, {0.58, 0.42}};
  config.spec.processes.arrivals.lengths = {0.0, 80000.0};
  // harvest/fading defaults live in the struct definitions
  config.spec.processes.fading.gains = {30.0, 12.0};
  config.spec.processes.fading.probabilities = {0.5, 0.5};
  return config;
}

CliConfig parse_cli_config(const std::string& json_text,
                           const std::string& source) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(source, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError(source, "top level must be an object");
  reject_unknown_keys(root, "",
                      {"system", "arrivals", "harvest", "fading",
                       "experiment"});

  CliConfig config = default_cli_config();
  if (root.contains("system")) parse_system(root.at("system"), config.spec.config);
  if (root.contains("arrivals"))
    parse_arrivals(root.at("arrivals"), config.spec.processes.arrivals);
  if (root.contains("harvest"))
    parse_harvest(root.at("harvest"), config.spec.processes.harvest);
  if (root.contains("fading"))
    parse_fading(root.at("fading"), config.spec.processes.fading);
  if (root.contains("experiment"))
    parse_experiment(root.at("experiment"), config.spec);
  return config;
}

CliConfig load_cli_config(const std::string& path) {
  std::ifstream input(path);
  if (!input)
    throw ConfigError(path, "cannot open config file");
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return parse_cli_config(buffer.str(), path);
}

}  // namespace lazysched
