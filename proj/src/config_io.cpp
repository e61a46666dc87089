#include "slice/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace slice {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

void check_keys(const json& obj, const std::string& origin,
                const std::string& section,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(origin, "unknown key '" +
                       (section.empty() ? item.key()
                                        : section + "." + item.key()) +
                       "'");
    }
  }
}

// Typed field readers keeping the "<origin>: ..." error shape.
template <typename T>
void read_field(const json& obj, const std::string& origin,
                const std::string& section, const char* key, T& out) {
  if (!obj.contains(key)) {
    return;
  }
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(origin, "key '" + section + "." + key + "' has the wrong type");
  }
}

void parse_scenario(const json& obj, const std::string& origin,
                    ScenarioConfig& out) {
  check_keys(obj, origin, "scenario",
             {"highway_length_m", "bs_positions_m", "uav_position_m",
              "uav_height_m", "task_size_bits", "task_cycles",
              "per_vehicle_rate_hz", "delay_bound_s", "subcarrier_bw_hz",
              "vm_rate_cps", "spectral_efficiency_bps_per_hz",
              "max_subcarriers", "max_vms", "unit_price_subcarrier",
              "unit_price_vm", "reserve_at_uav", "delay_scope"});
  read_field(obj, origin, "scenario", "highway_length_m", out.highway_length_m);
  read_field(obj, origin, "scenario", "bs_positions_m", out.bs_positions_m);
  read_field(obj, origin, "scenario", "uav_position_m", out.uav_position_m);
  read_field(obj, origin, "scenario", "uav_height_m", out.uav_height_m);
  read_field(obj, origin, "scenario", "task_size_bits", out.task_size_bits);
  read_field(obj, origin, "scenario", "task_cycles", out.task_cycles);
  read_field(obj, origin, "scenario", "per_vehicle_rate_hz",
             out.per_vehicle_rate_hz);
  read_field(obj, origin, "scenario", "delay_bound_s", out.delay_bound_s);
  read_field(obj, origin, "scenario", "subcarrier_bw_hz", out.subcarrier_bw_hz);
  read_field(obj, origin, "scenario", "vm_rate_cps", out.vm_rate_cps);
  read_field(obj, origin, "scenario", "spectral_efficiency_bps_per_hz",
             out.spectral_efficiency_bps_per_hz);
  read_field(obj, origin, "scenario", "max_subcarriers", out.max_subcarriers);
  read_field(obj, origin, "scenario", "max_vms", out.max_vms);
  read_field(obj, origin, "scenario", "unit_price_subcarrier",
             out.unit_price_subcarrier);
  read_field(obj, origin, "scenario", "unit_price_vm", out.unit_price_vm);
  read_field(obj, origin, "scenario", "reserve_at_uav", out.reserve_at_uav);
  if (obj.contains("delay_scope")) {
    std::string scope;
    read_field(obj, origin, "scenario", "delay_scope", scope);
    if (scope == "total") {
      out.delay_scope = DelayScope::kTotal;
    } else if (scope == "processing_only") {
      out.delay_scope = DelayScope::kProcessingOnly;
    } else {
      fail(origin, "scenario.delay_scope must be 'total' or "
                   "'processing_only', got '" +
                       scope + "'");
    }
  }
}

void parse_weights(const json& obj, const std::string& origin,
                   CostWeights& weights, EnvOptions& env) {
  check_keys(obj, origin, "weights", {"w_r", "w_s", "w_d", "penalty_mode"});
  read_field(obj, origin, "weights", "w_r", weights.w_r);
  read_field(obj, origin, "weights", "w_s", weights.w_s);
  read_field(obj, origin, "weights", "w_d", weights.w_d);
  if (obj.contains("penalty_mode")) {
    std::string mode;
    read_field(obj, origin, "weights", "penalty_mode", mode);
    if (mode == "per_ap") {
      env.penalty_mode = PenaltyMode::kPerAp;
    } else if (mode == "per_window") {
      env.penalty_mode = PenaltyMode::kPerWindow;
    } else if (mode == "proportional") {
      env.penalty_mode = PenaltyMode::kProportional;
    } else {
      fail(origin, "weights.penalty_mode must be 'per_ap', 'per_window' or "
                   "'proportional', got '" +
                       mode + "'");
    }
  }
}

void parse_horizon(const json& obj, const std::string& origin,
                   PlanningHorizon& out) {
  check_keys(obj, origin, "horizon",
             {"windows_per_episode", "window_duration_s", "operation_slot_s"});
  read_field(obj, origin, "horizon", "windows_per_episode",
             out.windows_per_episode);
  read_field(obj, origin, "horizon", "window_duration_s",
             out.window_duration_s);
  read_field(obj, origin, "horizon", "operation_slot_s", out.operation_slot_s);
}

void parse_traffic(const json& obj, const std::string& origin,
                   TrafficParams& out) {
  check_keys(obj, origin, "traffic",
             {"trace_csv", "hours", "n_min", "n_max", "noise_sd"});
  read_field(obj, origin, "traffic", "trace_csv", out.trace_csv);
  read_field(obj, origin, "traffic", "hours", out.hours);
  read_field(obj, origin, "traffic", "n_min", out.n_min);
  read_field(obj, origin, "traffic", "n_max", out.n_max);
  read_field(obj, origin, "traffic", "noise_sd", out.noise_sd);
}

void parse_agent(const json& obj, const std::string& origin, AgentConfig& out,
                 EnvOptions& env) {
  check_keys(obj, origin, "agent",
             {"actor_lr", "critic_lr", "gamma", "tau", "batch_size",
              "buffer_capacity", "noise_sd_initial", "noise_sd_final",
              "noise_decay_episodes", "warmup_steps", "episodes",
              "hidden_sizes", "eval_interval", "reward_scale",
              "vehicle_norm_max"});
  read_field(obj, origin, "agent", "actor_lr", out.actor_lr);
  read_field(obj, origin, "agent", "critic_lr", out.critic_lr);
  read_field(obj, origin, "agent", "gamma", out.gamma);
  read_field(obj, origin, "agent", "tau", out.tau);
  read_field(obj, origin, "agent", "batch_size", out.batch_size);
  read_field(obj, origin, "agent", "buffer_capacity", out.buffer_capacity);
  read_field(obj, origin, "agent", "noise_sd_initial", out.noise_sd_initial);
  read_field(obj, origin, "agent", "noise_sd_final", out.noise_sd_final);
  read_field(obj, origin, "agent", "noise_decay_episodes",
             out.noise_decay_episodes);
  read_field(obj, origin, "agent", "warmup_steps", out.warmup_steps);
  read_field(obj, origin, "agent", "episodes", out.episodes);
  read_field(obj, origin, "agent", "hidden_sizes", out.hidden_sizes);
  read_field(obj, origin, "agent", "eval_interval", out.eval_interval);
  read_field(obj, origin, "agent", "reward_scale", env.reward_scale);
  read_field(obj, origin, "agent", "vehicle_norm_max", env.vehicle_norm_max);
}

void parse_validation(const json& obj, const std::string& origin,
                      ValidationParams& out) {
  check_keys(obj, origin, "validation",
             {"tasks_per_point", "rel_err_limit", "grid"});
  read_field(obj, origin, "validation", "tasks_per_point",
             out.tasks_per_point);
  read_field(obj, origin, "validation", "rel_err_limit", out.rel_err_limit);
  if (obj.contains("grid")) {
    out.grid.clear();
    const json& grid = obj.at("grid");
    if (!grid.is_array()) {
      fail(origin, "validation.grid must be an array of [lambda, n_s, n_v]");
    }
    for (const json& entry : grid) {
      if (!entry.is_array() || entry.size() != 3) {
        fail(origin, "validation.grid entries must be [lambda, n_s, n_v]");
      }
      ValidationPoint p;
      try {
        p.lambda = entry.at(0).get<double>();
        p.n_subcarriers = entry.at(1).get<int>();
        p.n_vms = entry.at(2).get<int>();
      } catch (const json::exception&) {
        fail(origin, "validation.grid entries must be numeric");
      }
      out.grid.push_back(p);
    }
  }
}

}  // namespace

void ValidationParams::validate() const {
  if (tasks_per_point < 1) {
    throw std::invalid_argument("tasks_per_point must be >= 1");
  }
  if (rel_err_limit <= 0.0) {
    throw std::invalid_argument("rel_err_limit must be positive");
  }
  for (const ValidationPoint& p : grid) {
    if (p.lambda < 0.0 || p.n_subcarriers < 1 || p.n_vms < 1) {
      throw std::invalid_argument("validation grid point out of range");
    }
  }
}

std::vector<ValidationPoint> default_validation_grid() {
  // Reference points first, then utilizations from 0.3 to about 0.87 across
  // the reservation range.
  return {
      {10.0, 1, 1},  {10.0, 3, 2},   {20.0, 2, 2},  {5.0, 1, 1},
      {12.0, 1, 1},  {25.0, 2, 2},   {40.0, 3, 3},  {50.0, 4, 4},
      {80.0, 6, 6},  {100.0, 7, 7},  {120.0, 8, 8}, {160.0, 11, 11},
      {200.0, 14, 14},
  };
}

void ExperimentConfig::validate() const {
  scenario.validate();
  weights.validate();
  horizon.validate();
  agent.validate();
  validation.validate();
  if (traffic.hours < 1) {
    throw std::invalid_argument("traffic.hours must be >= 1");
  }
  if (traffic.n_min < 0 || traffic.n_max < traffic.n_min) {
    throw std::invalid_argument("traffic range requires 0 <= n_min <= n_max");
  }
  if (traffic.noise_sd < 0.0) {
    throw std::invalid_argument("traffic.noise_sd must be >= 0");
  }
  if (env.reward_scale <= 0.0) {
    throw std::invalid_argument("reward_scale must be positive");
  }
  if (env.vehicle_norm_max <= 0.0) {
    throw std::invalid_argument("vehicle_norm_max must be positive");
  }
}

ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    fail(origin, "top level must be a JSON object");
  }
  check_keys(root, origin, "",
             {"scenario", "weights", "horizon", "traffic", "agent",
              "validation"});
  ExperimentConfig cfg;
  if (root.contains("scenario")) {
    parse_scenario(root.at("scenario"), origin, cfg.scenario);
  }
  if (root.contains("weights")) {
    parse_weights(root.at("weights"), origin, cfg.weights, cfg.env);
  }
  if (root.contains("horizon")) {
    parse_horizon(root.at("horizon"), origin, cfg.horizon);
  }
  if (root.contains("traffic")) {
    parse_traffic(root.at("traffic"), origin, cfg.traffic);
  }
  if (root.contains("agent")) {
    parse_agent(root.at("agent"), origin, cfg.agent, cfg.env);
  }
  if (root.contains("validation")) {
    parse_validation(root.at("validation"), origin, cfg.validation);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail(origin, e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path), path);
}

std::string config_to_json(const ExperimentConfig& config) {
  json root;
  json& sc = root["scenario"];
  sc["highway_length_m"] = config.scenario.highway_length_m;
  sc["bs_positions_m"] = config.scenario.bs_positions_m;
  sc["uav_position_m"] = config.scenario.uav_position_m;
  sc["uav_height_m"] = config.scenario.uav_height_m;
  sc["task_size_bits"] = config.scenario.task_size_bits;
  sc["task_cycles"] = config.scenario.task_cycles;
  sc["per_vehicle_rate_hz"] = config.scenario.per_vehicle_rate_hz;
  sc["delay_bound_s"] = config.scenario.delay_bound_s;
  sc["subcarrier_bw_hz"] = config.scenario.subcarrier_bw_hz;
  sc["vm_rate_cps"] = config.scenario.vm_rate_cps;
  sc["spectral_efficiency_bps_per_hz"] =
      config.scenario.spectral_efficiency_bps_per_hz;
  sc["max_subcarriers"] = config.scenario.max_subcarriers;
  sc["max_vms"] = config.scenario.max_vms;
  sc["unit_price_subcarrier"] = config.scenario.unit_price_subcarrier;
  sc["unit_price_vm"] = config.scenario.unit_price_vm;
  sc["reserve_at_uav"] = config.scenario.reserve_at_uav;
  sc["delay_scope"] = config.scenario.delay_scope == DelayScope::kTotal
                          ? "total"
                          : "processing_only";

  json& w = root["weights"];
  w["w_r"] = config.weights.w_r;
  w["w_s"] = config.weights.w_s;
  w["w_d"] = config.weights.w_d;
  switch (config.env.penalty_mode) {
    case PenaltyMode::kPerAp:
      w["penalty_mode"] = "per_ap";
      break;
    case PenaltyMode::kPerWindow:
      w["penalty_mode"] = "per_window";
      break;
    case PenaltyMode::kProportional:
      w["penalty_mode"] = "proportional";
      break;
  }

  json& h = root["horizon"];
  h["windows_per_episode"] = config.horizon.windows_per_episode;
  h["window_duration_s"] = config.horizon.window_duration_s;
  h["operation_slot_s"] = config.horizon.operation_slot_s;

  json& t = root["traffic"];
  t["trace_csv"] = config.traffic.trace_csv;
  t["hours"] = config.traffic.hours;
  t["n_min"] = config.traffic.n_min;
  t["n_max"] = config.traffic.n_max;
  t["noise_sd"] = config.traffic.noise_sd;

  json& a = root["agent"];
  a["actor_lr"] = config.agent.actor_lr;
  a["critic_lr"] = config.agent.critic_lr;
  a["gamma"] = config.agent.gamma;
  a["tau"] = config.agent.tau;
  a["batch_size"] = config.agent.batch_size;
  a["buffer_capacity"] = config.agent.buffer_capacity;
  a["noise_sd_initial"] = config.agent.noise_sd_initial;
  a["noise_sd_final"] = config.agent.noise_sd_final;
  a["noise_decay_episodes"] = config.agent.noise_decay_episodes;
  a["warmup_steps"] = config.agent.warmup_steps;
  a["episodes"] = config.agent.episodes;
  a["hidden_sizes"] = config.agent.hidden_sizes;
  a["eval_interval"] = config.agent.eval_interval;
  a["reward_scale"] = config.env.reward_scale;
  a["vehicle_norm_max"] = config.env.vehicle_norm_max;

  json& v = root["validation"];
  v["tasks_per_point"] = config.validation.tasks_per_point;
  v["rel_err_limit"] = config.validation.rel_err_limit;
  json grid = json::array();
  for (const ValidationPoint& p : config.validation.grid) {
    grid.push_back(json::array({p.lambda, p.n_subcarriers, p.n_vms}));
  }
  v["grid"] = grid;

  return root.dump(2) + "\n";
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  json root;
  root["layer_sizes"] = ckpt.spec.layer_sizes;
  root["output_activation"] =
      ckpt.spec.output_activation == OutputActivation::kTanh ? "tanh"
                                                             : "identity";
  root["seed"] = ckpt.seed;
  root["episode"] = ckpt.episode;
  root["eval_cost"] = ckpt.eval_cost;
  root["values"] = ckpt.params.values;
  write_text_file(path, root.dump());
}

Checkpoint load_checkpoint(const std::string& path) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  Checkpoint ckpt;
  try {
    ckpt.spec.layer_sizes = root.at("layer_sizes").get<std::vector<int>>();
    const std::string act = root.at("output_activation").get<std::string>();
    if (act == "tanh") {
      ckpt.spec.output_activation = OutputActivation::kTanh;
    } else if (act == "identity") {
      ckpt.spec.output_activation = OutputActivation::kIdentity;
    } else {
      throw std::runtime_error(path + ": unknown output_activation '" + act +
                               "'");
    }
    ckpt.seed = root.value("seed", std::uint64_t{0});
    ckpt.episode = root.value("episode", -1);
    ckpt.eval_cost = root.value("eval_cost", 0.0);
    ckpt.params.values = root.at("values").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed checkpoint: " + e.what());
  }
  ckpt.spec.validate();
  if (ckpt.params.values.size() != ckpt.spec.parameter_count()) {
    throw std::runtime_error(
        path + ": parameter count does not match the stored layer sizes");
  }
  return ckpt;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(path + ": cannot open for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw std::runtime_error(path + ": read failed");
  }
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(path + ": cannot open for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw std::runtime_error(path + ": write failed");
  }
}

}  // namespace slice
