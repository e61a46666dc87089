#pragma once

#include <string>
#include <vector>

#include "slice/ddpg.hpp"
#include "slice/env.hpp"
#include "slice/nn.hpp"
#include "slice/scenario.hpp"

namespace slice {

// Traffic source description: an explicit CSV trace wins over the synthetic
// generator when both are present.
struct TrafficParams {
  std::string trace_csv;  // empty -> synthesize
  int hours = 24;
  int n_min = 5;
  int n_max = 60;
  double noise_sd = 2.0;

  bool operator==(const TrafficParams&) const = default;
};

// One (lambda, n_subcarriers, n_vms) point of the queuing validation grid.
struct ValidationPoint {
  double lambda = 0.0;
  int n_subcarriers = 1;
  int n_vms = 1;

  bool operator==(const ValidationPoint&) const = default;
};

struct ValidationParams {
  long tasks_per_point = 1000000;
  double rel_err_limit = 0.03;
  std::vector<ValidationPoint> grid;  // empty -> built-in default grid

  void validate() const;

  bool operator==(const ValidationParams&) const = default;
};

// Built-in validation grid: the documented reference points plus a spread of
// utilizations across the reservation range.
std::vector<ValidationPoint> default_validation_grid();

// Everything an experiment needs, loadable from one JSON file with sections
// {scenario, weights, horizon, traffic, agent, validation}. Missing keys keep
// their defaults; unknown sections or keys are rejected outright.
struct ExperimentConfig {
  ScenarioConfig scenario;
  CostWeights weights;
  PlanningHorizon horizon;
  TrafficParams traffic;
  AgentConfig agent;
  EnvOptions env;
  ValidationParams validation;

  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Parses and validates a config. Throws std::runtime_error with a
// "<origin>: ..." message on unreadable files, malformed JSON, unknown keys,
// or invalid values.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& origin);

// Serializes every field of a config (doubles round-trip exactly), so
// parse_config(config_to_json(c), ...) == c.
std::string config_to_json(const ExperimentConfig& config);

// Network checkpoint: architecture plus the flat parameter block, stored as
// JSON with round-trip-exact doubles.
struct Checkpoint {
  MlpSpec spec;
  ParameterSet params;
  std::uint64_t seed = 0;
  int episode = -1;    // training episode the snapshot was taken at
  double eval_cost = 0.0;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
// Throws std::runtime_error on unreadable files or layout mismatches.
Checkpoint load_checkpoint(const std::string& path);

// Small file helpers shared by the command layer.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace slice
