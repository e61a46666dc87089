#include <string>

#include "CLI11.hpp"
#include "slice/cli.hpp"

// Command-line front end: slice-reserve <command> --config --seed --out
// with the root seed also settable through SLICE_RESERVE_SEED.
int main(int argc, char** argv) {
  CLI::App app{"Per-window spectrum/compute reservation lab: DDPG planner, "
               "myopic baseline, queuing validation"};
  app.require_subcommand(1);

  slice::CliOptions opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path,
                    "JSON experiment config (defaults when omitted)");
    cmd->add_option("--seed", opts.seed, "root random seed")
        ->envname("SLICE_RESERVE_SEED");
    cmd->add_option("--out", opts.out_dir, "output directory");
  };

  CLI::App* validate =
      app.add_subcommand("validate-queuing",
                         "check analytic delays against the event simulator");
  add_common(validate);

  CLI::App* train = app.add_subcommand("train", "run one full training");
  add_common(train);

  CLI::App* compare = app.add_subcommand(
      "compare", "evaluate a checkpoint against the myopic baseline");
  add_common(compare);
  compare->add_option("--checkpoint", opts.checkpoint_path,
                      "actor checkpoint JSON")
      ->required();
  compare->add_option("--trace", opts.trace_path,
                      "evaluation trace CSV (synthetic when omitted)");
  compare->add_flag("--des-replay", opts.des_replay,
                    "replay decisions through the event simulator");

  CLI::App* synth =
      app.add_subcommand("synth-trace", "generate a synthetic diurnal trace");
  add_common(synth);

  CLI::App* baseline =
      app.add_subcommand("baseline", "myopic baseline day report");
  add_common(baseline);
  baseline->add_option("--trace", opts.trace_path,
                       "evaluation trace CSV (synthetic when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? slice::kExitOk : slice::kExitUsage;
  }

  if (validate->parsed()) {
    return slice::cmd_validate_queuing(opts);
  }
  if (train->parsed()) {
    return slice::cmd_train(opts);
  }
  if (compare->parsed()) {
    return slice::cmd_compare(opts);
  }
  if (synth->parsed()) {
    return slice::cmd_synth_trace(opts);
  }
  return slice::cmd_baseline(opts);
}
