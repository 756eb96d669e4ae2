#include "dtcns/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "dtcns/errors.hpp"

using nlohmann::json;

namespace dtcns {

namespace {

template <class T>
void read_field(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok |= key == k;
    if (!ok) throw ConfigError(std::string("unknown ") + what + " key '" + key + "'");
  }
}

std::string g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

#define SIM_FIELDS(X)                                                                      \
  X(num_nodes) X(episode_days) X(ticks_per_day) X(bond_window_ticks)                      \
  X(threshold_cooperative) X(threshold_egocentric) X(threshold_ignorant) X(eta) X(b)      \
  X(alpha) X(delta) X(noise_sigma) X(ignorant_constant) X(rl_epoch_ticks)                 \
  X(encounter_probability) X(transmissibility) X(recovery_days) X(permanent_recovery)    \
  X(deadzone)

SimConfig sim_config_from_json(const json& j, SimConfig base) {
#define NAME(f) #f,
  reject_unknown(j, {SIM_FIELDS(NAME)}, "sim");
#undef NAME
#define READ(f) read_field(j, #f, base.f);
  SIM_FIELDS(READ)
#undef READ
  base.validate();
  return base;
}

json to_json(const SimConfig& cfg) {
  json j;
#define WRITE(f) j[#f] = cfg.f;
  SIM_FIELDS(WRITE)
#undef WRITE
  return j;
}

#define TD3_FIELDS(X)                                                                      \
  X(learning_rate) X(batch_size) X(total_steps) X(discount) X(policy_noise)               \
  X(exploration_noise) X(target_noise_clip) X(tau) X(policy_delay) X(buffer_capacity)     \
  X(hidden) X(reward_scale) X(max_grad_norm) X(warmup_steps)

Td3Config td3_config_from_json(const json& j, Td3Config base) {
#define NAME(f) #f,
  reject_unknown(j, {TD3_FIELDS(NAME) "optimizer"}, "td3");
#undef NAME
#define READ(f) read_field(j, #f, base.f);
  TD3_FIELDS(READ)
#undef READ
  if (j.contains("optimizer")) {
    const auto opt = j.at("optimizer").get<std::string>();
    if (opt == "sgd") base.optimizer = OptimizerKind::Sgd;
    else if (opt == "adam") base.optimizer = OptimizerKind::Adam;
    else throw ConfigError("td3 optimizer must be 'sgd' or 'adam'");
  }
  base.validate();
  return base;
}

json to_json(const Td3Config& cfg) {
  json j;
#define WRITE(f) j[#f] = cfg.f;
  TD3_FIELDS(WRITE)
#undef WRITE
  j["optimizer"] = cfg.optimizer == OptimizerKind::Sgd ? "sgd" : "adam";
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  reject_unknown(j,
                 {"sim", "scenarios", "grid", "seeds", "k_values", "output_dir", "policies_dir",
                  "plots", "write_traces", "random_placement", "jobs"},
                 "experiment");
  ExperimentConfig cfg;
  if (j.contains("sim")) cfg.sim = sim_config_from_json(j.at("sim"));
  read_field(j, "seeds", cfg.seeds);
  read_field(j, "k_values", cfg.k_values);
  read_field(j, "output_dir", cfg.output_dir);
  read_field(j, "policies_dir", cfg.policies_dir);
  read_field(j, "plots", cfg.plots);
  read_field(j, "write_traces", cfg.write_traces);
  read_field(j, "random_placement", cfg.random_placement);
  read_field(j, "jobs", cfg.jobs);
  if (j.contains("grid")) {
    const auto& grid = j.at("grid");
    if (grid.is_string()) {
      if (grid.get<std::string>() != "resilience")
        throw ConfigError("grid must be a list or \"resilience\"");
      cfg.grid = resilience_grid();
    } else {
      cfg.grid.clear();
      for (const auto& cell : grid) {
        reject_unknown(cell, {"zeta", "recovery_days"}, "grid");
        GridPoint p;
        read_field(cell, "zeta", p.zeta);
        read_field(cell, "recovery_days", p.recovery_days);
        cfg.grid.push_back(p);
      }
    }
  } else {
    cfg.grid = {GridPoint{cfg.sim.transmissibility, cfg.sim.recovery_days}};
  }
  std::vector<std::string> names = {"single"};
  read_field(j, "scenarios", names);
  for (const auto& name : names) {
    if (name == "single") {
      for (Style s : {Style::Cooperative, Style::Egocentric, Style::Ignorant})
        cfg.scenarios.push_back(Scenario::single(s));
    } else if (name == "mixed") {
      for (Style s : {Style::Egocentric, Style::Ignorant})
        for (int k : cfg.k_values) cfg.scenarios.push_back(Scenario::mixed(s, k));
    } else {
      cfg.scenarios.push_back(Scenario::parse(name));
    }
  }
  if (cfg.policies_dir.empty()) cfg.policies_dir = cfg.output_dir + "/policies";
  cfg.validate();
  return cfg;
}

TrainingFile training_config_from_json(const json& j, PolicyKind kind) {
  reject_unknown(j, {"sim", "td3"}, "training");
  TrainingFile f;
  f.td3 = kind == PolicyKind::Cooperative ? Td3Config::cooperative_defaults()
                                          : Td3Config::egocentric_defaults();
  if (j.contains("sim")) f.sim = sim_config_from_json(j.at("sim"));
  if (j.contains("td3")) f.td3 = td3_config_from_json(j.at("td3"), f.td3);
  return f;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("cannot parse ") + path + ": " + e.what());
  }
}

void dump_defaults(std::ostream& out) {
  const SimConfig sim;
  out << "[simulation]\n";
#define DUMP(f) out << #f << " = " << g(static_cast<double>(sim.f)) << '\n';
  SIM_FIELDS(DUMP)
#undef DUMP
  auto td3 = [&](const char* name, const Td3Config& c) {
    out << "\n[td3." << name << "]\n";
    out << "learning_rate = " << g(c.learning_rate) << '\n'
        << "batch_size = " << c.batch_size << '\n'
        << "total_steps = " << c.total_steps << '\n'
        << "discount = " << g(c.discount) << '\n'
        << "policy_noise = " << g(c.policy_noise) << '\n'
        << "exploration_noise = " << g(c.exploration_noise) << '\n'
        << "target_noise_clip = " << g(c.target_noise_clip) << '\n'
        << "tau = " << g(c.tau) << '\n'
        << "policy_delay = " << c.policy_delay << '\n'
        << "buffer_capacity = " << c.buffer_capacity << '\n'
        << "hidden =";
    for (int h : c.hidden) out << ' ' << h;
    out << '\n'
        << "optimizer = " << (c.optimizer == OptimizerKind::Sgd ? "sgd" : "adam") << '\n'
        << "reward_scale = " << g(c.reward_scale) << '\n'
        << "max_grad_norm = " << g(c.max_grad_norm) << '\n'
        << "warmup_steps = " << c.warmup_steps << '\n';
  };
  td3("cooperative", Td3Config::cooperative_defaults());
  td3("egocentric", Td3Config::egocentric_defaults());
}

}  // namespace dtcns
