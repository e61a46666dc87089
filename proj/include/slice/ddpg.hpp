#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slice/env.hpp"
#include "slice/nn.hpp"
#include "slice/rng.hpp"
#include "slice/rollout.hpp"

namespace slice {

// Learner hyperparameters. Learning rates follow the evaluated setup; the
// remaining fields are conventional DDPG choices recorded here so every run
// is reproducible from the config alone.
struct AgentConfig {
  double actor_lr = 2e-4;
  double critic_lr = 2e-3;
  double gamma = 0.9;
  double tau = 0.01;
  int batch_size = 64;
  std::size_t buffer_capacity = 100000;
  double noise_sd_initial = 0.3;
  double noise_sd_final = 0.05;
  int noise_decay_episodes = 3000;
  int warmup_steps = 500;
  int episodes = 5000;
  std::vector<int> hidden_sizes = {128, 64};
  // Episodes between held-out evaluations used for best-checkpoint tracking.
  int eval_interval = 25;

  void validate() const;  // throws std::invalid_argument

  bool operator==(const AgentConfig&) const = default;
};

// Exploration schedule: linear decay from noise_sd_initial to noise_sd_final
// over noise_decay_episodes, flat afterwards.
double noise_sd_for_episode(const AgentConfig& cfg, int episode);

// Fixed-capacity ring of transitions with uniform-with-replacement sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_[i]; }

  // Draws exactly `batch` indices uniformly with replacement into `out`.
  void sample_indices(int batch, SeededStream& stream,
                      std::vector<std::size_t>& out) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

enum class ActMode { kTrain, kEval };

struct TrainStepDiagnostics {
  bool applied = false;  // false while still inside warmup
  double critic_loss = 0.0;
  double actor_objective = 0.0;  // mean Q of the actor's own actions
};

struct TrainingLogRow {
  int episode = 0;
  double cum_cost = 0.0;
  std::optional<double> moving_avg;  // 5-point; empty for the first 4 rows
  double critic_loss_mean = 0.0;
  double noise_sd = 0.0;
};

struct TrainingLog {
  std::vector<TrainingLogRow> rows;
  ParameterSet best_actor;  // best held-out evaluation seen during training
  double best_eval_cost = 0.0;
  int best_episode = -1;
  bool aborted = false;
  std::string abort_reason;
};

// Deep deterministic policy gradient learner: online + target actor/critic,
// replay buffer, and the coupled gradient updates.
class DdpgAgent {
 public:
  DdpgAgent(int state_dim, int action_dim, const AgentConfig& config,
            SeededStream& init_stream);

  const AgentConfig& config() const { return config_; }
  const MlpSpec& actor_spec() const { return actor_spec_; }
  const MlpSpec& critic_spec() const { return critic_spec_; }
  const ParameterSet& actor() const { return actor_; }
  const ParameterSet& critic() const { return critic_; }
  const ParameterSet& actor_target() const { return actor_target_; }
  const ParameterSet& critic_target_params() const { return critic_target_; }
  ParameterSet& mutable_actor() { return actor_; }
  ReplayBuffer& buffer() { return buffer_; }
  long observed_steps() const { return observed_steps_; }

  // Deterministic policy output; train mode adds Gaussian noise per
  // component and clips to [-1, 1].
  std::vector<double> act(const EnvState& state, double noise_sd,
                          SeededStream& noise_stream, ActMode mode) const;

  // Bellman backup target y = r + gamma * (1 - terminal) * Q'(s', mu'(s')).
  double critic_target(const Transition& t) const;

  // Stores a transition and counts it toward the warmup threshold.
  void remember(Transition t);

  // Samples a minibatch and applies one coupled critic/actor update plus the
  // soft target update. No-op (applied = false) until warmup_steps
  // transitions have been observed and the buffer can fill a batch.
  TrainStepDiagnostics train_step(SeededStream& replay_stream);

  // The update itself, exposed for tests that control batch contents.
  TrainStepDiagnostics train_on_batch(const std::vector<Transition>& batch);

  // theta_target <- tau * theta + (1 - tau) * theta_target, both networks.
  void soft_update(double tau);

 private:
  AgentConfig config_;
  MlpSpec actor_spec_;
  MlpSpec critic_spec_;
  ParameterSet actor_;
  ParameterSet critic_;
  ParameterSet actor_target_;
  ParameterSet critic_target_;
  OptimizerState actor_opt_;
  OptimizerState critic_opt_;
  ReplayBuffer buffer_;
  long observed_steps_ = 0;

  // Reused workspaces keeping the per-step update allocation-free.
  ForwardCache actor_cache_;
  ForwardCache critic_cache_;
  Gradients actor_grads_;
  Gradients critic_grads_;
  Gradients action_grads_;
  std::vector<double> critic_input_;
  std::vector<double> upstream_;
  std::vector<std::size_t> batch_indices_;
  std::vector<double> targets_;
};

// Builds the environment for one training episode.
using EnvFactory = std::function<SliceEnv(int episode)>;

// Held-out evaluation of an actor snapshot; returns cumulative weighted cost.
using EvalFn = std::function<double(const ParameterSet& actor)>;

// Observer invoked once per environment step with the full cost row, so
// callers can stream a per-step log of the whole run.
using StepLogFn = std::function<void(int episode, const WindowCostRow& row)>;

// Episode loop: act -> step -> remember -> train_step for every window, with
// per-episode logging, the 5-point moving average, and best-checkpoint
// tracking through `evaluate` (pass nullptr to keep the final policy only).
// Aborts with a diagnostic reason when a non-finite loss appears.
TrainingLog train(DdpgAgent& agent, const EnvFactory& make_env,
                  const EvalFn& evaluate, SeededStream& noise_stream,
                  SeededStream& replay_stream,
                  const StepLogFn& step_log = nullptr);

// Noise-free rollout of an actor snapshot over one trace day.
EpisodeCostReport evaluate_actor(const ParameterSet& actor,
                                 const MlpSpec& actor_spec,
                                 const TrafficTrace& trace, int episode_start,
                                 const ScenarioConfig& cfg,
                                 const CostWeights& weights,
                                 const PlanningHorizon& horizon,
                                 const RolloutOptions& opts = {});

// TrainingLog CSV: episode,cum_cost,moving_avg,critic_loss_mean,noise_sd
std::string training_log_to_csv(const TrainingLog& log);

}  // namespace slice
