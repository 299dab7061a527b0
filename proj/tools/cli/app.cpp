#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace chids::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid intrusion detection for cluster-head sensor nodes", "chids"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "Flat key = value configuration file");
  app.add_option("--set", overrides, "Override one config key (key=value); repeatable");
  app.add_option("--seed", seed, "Sampling and simulation seed");
  app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Artifact directory");

  auto* preprocess = app.add_subcommand("preprocess", "Dedupe, split, prune, rank, select, normalize");
  std::optional<std::string> dataset;
  preprocess->add_option("--dataset", dataset, "KDD Cup 99 file (plain or gzip)");
  auto* train = app.add_subcommand("train", "Fit the PART rule list on the cached training split");
  auto* evaluate = app.add_subcommand("evaluate", "Score the model on the test split and write reports");
  auto* report = app.add_subcommand("report", "Rewrite reports from existing artifacts");

  auto* detect = app.add_subcommand("detect", "Run the hybrid pipeline over a record stream");
  DetectInput detect_input;
  std::string records_path, events_path, flags_path;
  detect->add_option("--records", records_path, "KDD-format records")->required();
  auto* events_opt = detect->add_option("--events", events_path, "Event stream, event i for record i");
  auto* flags_opt = detect->add_option("--flags", flags_path, "One 0/1 anomaly flag per record");
  auto* oracle_opt = detect->add_flag("--oracle", detect_input.oracle, "Flag exactly the labeled attacks");
  events_opt->excludes(flags_opt)->excludes(oracle_opt);
  flags_opt->excludes(oracle_opt);

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic event stream and evaluate the rules");
  std::string scenario;
  simulate->add_option("scenario", scenario, "benign, hello-flood, selective-forwarding, sinkhole, "
                                             "modification, replay, sybil or jamming")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    if (seed) cfg.split.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out_dir) cfg.out = *out_dir;
    if (dataset) cfg.dataset = *dataset;

    if (*preprocess) {
      cmd_preprocess(cfg, out);
    } else if (*train) {
      cmd_train(cfg, out);
    } else if (*evaluate) {
      cmd_evaluate(cfg, out);
    } else if (*report) {
      cmd_report(cfg, out);
    } else if (*detect) {
      detect_input.records = records_path;
      if (!events_path.empty()) detect_input.events = events_path;
      if (!flags_path.empty()) detect_input.flags = flags_path;
      cmd_detect(cfg, detect_input, out);
    } else if (*simulate) {
      cmd_simulate(cfg, scenario, out);
    }
  } catch (const Error& e) {
    err << "chids: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "chids: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace chids::cli
