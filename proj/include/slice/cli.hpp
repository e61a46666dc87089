#pragma once

#include <cstdint>
#include <string>

namespace slice {

// Process-level exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitThresholdFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumericalAbort = 3;

// Options common to all commands; command-specific fields are ignored where
// they do not apply.
struct CliOptions {
  std::string config_path;  // empty -> built-in defaults
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string checkpoint_path;  // compare: actor snapshot to evaluate
  std::string trace_path;       // compare/baseline: evaluation trace override
  bool des_replay = false;      // compare: replay decisions through the DES
};

// Each command returns one of the exit codes above and reports errors on
// stderr. All artifacts land inside opts.out_dir (created when missing).

// Queuing-vs-DES validation grid; exit 0 iff every stable point matches
// within the configured relative-error band at 95% confidence.
int cmd_validate_queuing(const CliOptions& opts);

// Full training run: training log, per-step cost log, final/best checkpoints.
int cmd_train(const CliOptions& opts);

// Noise-free checkpoint evaluation against the myopic baseline on a shared
// trace.
int cmd_compare(const CliOptions& opts);

// Synthetic diurnal trace generation.
int cmd_synth_trace(const CliOptions& opts);

// Myopic baseline day report on the evaluation trace.
int cmd_baseline(const CliOptions& opts);

}  // namespace slice
