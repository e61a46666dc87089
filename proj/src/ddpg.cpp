#include "slice/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slice/csv.hpp"

namespace slice {

void AgentConfig::validate() const {
  if (actor_lr <= 0.0 || critic_lr <= 0.0) {
    throw std::invalid_argument("learning rates must be positive");
  }
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("gamma must lie in [0, 1)");
  }
  if (tau <= 0.0 || tau > 1.0) {
    throw std::invalid_argument("tau must lie in (0, 1]");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("batch_size must be >= 1");
  }
  if (buffer_capacity < static_cast<std::size_t>(batch_size)) {
    throw std::invalid_argument("buffer_capacity must be >= batch_size");
  }
  if (noise_sd_initial < 0.0 || noise_sd_final < 0.0) {
    throw std::invalid_argument("noise levels must be >= 0");
  }
  if (noise_decay_episodes < 0) {
    throw std::invalid_argument("noise_decay_episodes must be >= 0");
  }
  if (warmup_steps < 0) {
    throw std::invalid_argument("warmup_steps must be >= 0");
  }
  if (episodes < 0) {
    throw std::invalid_argument("episodes must be >= 0");
  }
  if (hidden_sizes.empty()) {
    throw std::invalid_argument("at least one hidden layer is required");
  }
  for (int h : hidden_sizes) {
    if (h < 1) {
      throw std::invalid_argument("hidden layer width must be >= 1");
    }
  }
  if (eval_interval < 1) {
    throw std::invalid_argument("eval_interval must be >= 1");
  }
}

double noise_sd_for_episode(const AgentConfig& cfg, int episode) {
  if (cfg.noise_decay_episodes <= 0) {
    return cfg.noise_sd_final;
  }
  const double frac = std::min(
      1.0, static_cast<double>(episode) / cfg.noise_decay_episodes);
  return cfg.noise_sd_initial +
         (cfg.noise_sd_final - cfg.noise_sd_initial) * frac;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) {
    throw std::invalid_argument("replay capacity must be >= 1");
  }
  items_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

void ReplayBuffer::sample_indices(int batch, SeededStream& stream,
                                  std::vector<std::size_t>& out) const {
  if (items_.empty()) {
    throw std::logic_error("cannot sample from an empty replay buffer");
  }
  out.resize(static_cast<std::size_t>(batch));
  const int hi = static_cast<int>(items_.size()) - 1;
  for (auto& idx : out) {
    idx = static_cast<std::size_t>(stream.uniform_int(0, hi));
  }
}

namespace {

MlpSpec make_actor_spec(int state_dim, int action_dim,
                        const std::vector<int>& hidden) {
  MlpSpec spec;
  spec.layer_sizes.reserve(hidden.size() + 2);
  spec.layer_sizes.push_back(state_dim);
  spec.layer_sizes.insert(spec.layer_sizes.end(), hidden.begin(), hidden.end());
  spec.layer_sizes.push_back(action_dim);
  spec.output_activation = OutputActivation::kTanh;
  return spec;
}

MlpSpec make_critic_spec(int state_dim, int action_dim,
                         const std::vector<int>& hidden) {
  MlpSpec spec;
  spec.layer_sizes.reserve(hidden.size() + 2);
  spec.layer_sizes.push_back(state_dim + action_dim);
  spec.layer_sizes.insert(spec.layer_sizes.end(), hidden.begin(), hidden.end());
  spec.layer_sizes.push_back(1);
  spec.output_activation = OutputActivation::kIdentity;
  return spec;
}

}  // namespace

DdpgAgent::DdpgAgent(int state_dim, int action_dim, const AgentConfig& config,
                     SeededStream& init_stream)
    : config_(config),
      actor_spec_(make_actor_spec(state_dim, action_dim, config.hidden_sizes)),
      critic_spec_(
          make_critic_spec(state_dim, action_dim, config.hidden_sizes)),
      buffer_(config.buffer_capacity) {
  config_.validate();
  actor_spec_.validate();
  critic_spec_.validate();
  actor_ = init_params(actor_spec_, init_stream);
  critic_ = init_params(critic_spec_, init_stream);
  actor_target_ = actor_;
  critic_target_ = critic_;
  actor_opt_ = OptimizerState(actor_.values.size(), config_.actor_lr);
  critic_opt_ = OptimizerState(critic_.values.size(), config_.critic_lr);
}

std::vector<double> DdpgAgent::act(const EnvState& state, double noise_sd,
                                   SeededStream& noise_stream,
                                   ActMode mode) const {
  std::vector<double> action = forward(actor_, actor_spec_, state.as_vector());
  if (mode == ActMode::kTrain) {
    for (double& a : action) {
      a = std::clamp(a + noise_stream.normal(0.0, noise_sd), -1.0, 1.0);
    }
  }
  return action;
}

double DdpgAgent::critic_target(const Transition& t) const {
  if (t.terminal) {
    return t.reward;
  }
  const std::vector<double> next = t.next_state.as_vector();
  const std::vector<double> next_action =
      forward(actor_target_, actor_spec_, next);
  std::vector<double> input = next;
  input.insert(input.end(), next_action.begin(), next_action.end());
  const double q = forward(critic_target_, critic_spec_, input)[0];
  return t.reward + config_.gamma * q;
}

void DdpgAgent::remember(Transition t) {
  buffer_.push(std::move(t));
  observed_steps_ += 1;
}

TrainStepDiagnostics DdpgAgent::train_step(SeededStream& replay_stream) {
  if (observed_steps_ < config_.warmup_steps ||
      buffer_.size() < static_cast<std::size_t>(config_.batch_size)) {
    return {};
  }
  buffer_.sample_indices(config_.batch_size, replay_stream, batch_indices_);
  std::vector<Transition> batch;
  batch.reserve(batch_indices_.size());
  for (std::size_t idx : batch_indices_) {
    batch.push_back(buffer_.at(idx));
  }
  return train_on_batch(batch);
}

TrainStepDiagnostics DdpgAgent::train_on_batch(
    const std::vector<Transition>& batch) {
  if (batch.empty()) {
    throw std::invalid_argument("training batch must not be empty");
  }
  const std::size_t b = batch.size();
  const std::size_t state_dim =
      static_cast<std::size_t>(actor_spec_.input_size());
  const std::size_t action_dim =
      static_cast<std::size_t>(actor_spec_.output_size());

  TrainStepDiagnostics diag;
  diag.applied = true;

  // --- Critic regression toward the Bellman targets. ---
  targets_.resize(b);
  for (std::size_t i = 0; i < b; ++i) {
    targets_[i] = critic_target(batch[i]);
  }
  zero_gradients(critic_spec_, critic_grads_);
  double loss = 0.0;
  upstream_.assign(1, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    critic_input_ = batch[i].state.as_vector();
    critic_input_.insert(critic_input_.end(), batch[i].action.begin(),
                         batch[i].action.end());
    forward_cached(critic_, critic_spec_, critic_input_, critic_cache_);
    const double q = critic_cache_.output()[0];
    const double residual = q - targets_[i];
    loss += residual * residual / static_cast<double>(b);
    upstream_[0] = 2.0 * residual / static_cast<double>(b);
    backward(critic_, critic_spec_, critic_cache_, upstream_, critic_grads_);
  }
  diag.critic_loss = loss;
  optimizer_step(critic_opt_, critic_, critic_grads_.params);

  // --- Actor ascent through the critic's action gradient. ---
  zero_gradients(actor_spec_, actor_grads_);
  double objective = 0.0;
  std::vector<double> actor_upstream(action_dim);
  upstream_.assign(1, 1.0);
  for (std::size_t i = 0; i < b; ++i) {
    const std::vector<double> state_vec = batch[i].state.as_vector();
    forward_cached(actor_, actor_spec_, state_vec, actor_cache_);
    const std::vector<double>& proposed = actor_cache_.output();
    critic_input_ = state_vec;
    critic_input_.insert(critic_input_.end(), proposed.begin(),
                         proposed.end());
    forward_cached(critic_, critic_spec_, critic_input_, critic_cache_);
    objective += critic_cache_.output()[0] / static_cast<double>(b);
    backward(critic_, critic_spec_, critic_cache_, upstream_, action_grads_,
             /*want_param_grads=*/false);
    // Maximizing mean Q means descending on -Q; chain dQ/da into the actor.
    for (std::size_t j = 0; j < action_dim; ++j) {
      actor_upstream[j] =
          -action_grads_.input[state_dim + j] / static_cast<double>(b);
    }
    backward(actor_, actor_spec_, actor_cache_, actor_upstream, actor_grads_);
  }
  diag.actor_objective = objective;
  optimizer_step(actor_opt_, actor_, actor_grads_.params);

  soft_update(config_.tau);
  return diag;
}

void DdpgAgent::soft_update(double tau) {
  auto blend = [tau](const ParameterSet& online, ParameterSet& target) {
    for (std::size_t i = 0; i < online.values.size(); ++i) {
      target.values[i] =
          tau * online.values[i] + (1.0 - tau) * target.values[i];
    }
  };
  blend(actor_, actor_target_);
  blend(critic_, critic_target_);
}

TrainingLog train(DdpgAgent& agent, const EnvFactory& make_env,
                  const EvalFn& evaluate, SeededStream& noise_stream,
                  SeededStream& replay_stream, const StepLogFn& step_log) {
  const AgentConfig& cfg = agent.config();
  TrainingLog log;
  log.best_actor = agent.actor();
  log.best_eval_cost = std::numeric_limits<double>::infinity();
  if (cfg.episodes == 0) {
    return log;
  }
  if (evaluate) {
    log.best_eval_cost = evaluate(agent.actor());
  }
  log.rows.reserve(static_cast<std::size_t>(cfg.episodes));
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    SliceEnv env = make_env(ep);
    EnvState state = env.reset();
    const double sd = noise_sd_for_episode(cfg, ep);
    double ep_cost = 0.0;
    double loss_sum = 0.0;
    long loss_count = 0;
    int w = 0;
    while (!env.done()) {
      const ReservationDecision prev = env.previous_decision();
      const TrafficWindow traffic = env.current_window();
      const std::vector<double> action =
          agent.act(state, sd, noise_stream, ActMode::kTrain);
      SliceEnv::StepResult res = env.step(action);
      agent.remember(res.transition);
      const TrainStepDiagnostics diag = agent.train_step(replay_stream);
      if (diag.applied) {
        if (!std::isfinite(diag.critic_loss) ||
            !std::isfinite(diag.actor_objective)) {
          log.aborted = true;
          log.abort_reason = "non-finite loss at episode " +
                             std::to_string(ep) + ", window " +
                             std::to_string(w);
          return log;
        }
        loss_sum += diag.critic_loss;
        loss_count += 1;
      }
      ep_cost += res.cost.weighted_total;
      if (step_log) {
        WindowCostRow row;
        row.window = w;
        row.decision = res.decision;
        row.cost = res.cost;
        row.reward = res.transition.reward;
        row.cumulative = ep_cost;
        row.per_ap.reserve(res.decision.per_ap.size());
        for (int ap = 0; ap < static_cast<int>(res.decision.per_ap.size());
             ++ap) {
          row.per_ap.push_back(ap_cost_breakdown(
              prev, res.decision, traffic, ap, env.config(),
              env.options().penalty_mode));
        }
        step_log(ep, row);
      }
      state = res.transition.next_state;
      ++w;
    }

    TrainingLogRow row;
    row.episode = ep;
    row.cum_cost = ep_cost;
    row.critic_loss_mean = loss_count > 0 ? loss_sum / loss_count : 0.0;
    row.noise_sd = sd;
    log.rows.push_back(row);
    const std::size_t n = log.rows.size();
    if (n >= 5) {
      double sum = 0.0;
      for (std::size_t i = n - 5; i < n; ++i) {
        sum += log.rows[i].cum_cost;
      }
      log.rows.back().moving_avg = sum / 5.0;
    }

    if (evaluate &&
        ((ep + 1) % cfg.eval_interval == 0 || ep + 1 == cfg.episodes)) {
      const double cost = evaluate(agent.actor());
      if (cost < log.best_eval_cost) {
        log.best_eval_cost = cost;
        log.best_actor = agent.actor();
        log.best_episode = ep;
      }
    }
  }
  if (!evaluate) {
    log.best_actor = agent.actor();
    log.best_episode = cfg.episodes - 1;
  }
  return log;
}

EpisodeCostReport evaluate_actor(const ParameterSet& actor,
                                 const MlpSpec& actor_spec,
                                 const TrafficTrace& trace, int episode_start,
                                 const ScenarioConfig& cfg,
                                 const CostWeights& weights,
                                 const PlanningHorizon& horizon,
                                 const RolloutOptions& opts) {
  DecisionFn decide = [&](int, const EnvState& state,
                          const TrafficWindow&) {
    const std::vector<double> action =
        forward(actor, actor_spec, state.as_vector());
    return action_to_decision(action, cfg);
  };
  return rollout_policy(trace, episode_start, cfg, weights, horizon, decide,
                        opts);
}

std::string training_log_to_csv(const TrainingLog& log) {
  std::string out = "episode,cum_cost,moving_avg,critic_loss_mean,noise_sd\n";
  for (const auto& row : log.rows) {
    out += std::to_string(row.episode);
    out.push_back(',');
    append_csv_double(out, row.cum_cost);
    out.push_back(',');
    if (row.moving_avg.has_value()) {
      append_csv_double(out, *row.moving_avg);
    }
    out.push_back(',');
    append_csv_double(out, row.critic_loss_mean);
    out.push_back(',');
    append_csv_double(out, row.noise_sd);
    out.push_back('\n');
  }
  return out;
}

}  // namespace slice
