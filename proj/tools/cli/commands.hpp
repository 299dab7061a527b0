#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "chids/error.hpp"
#include "run_config.hpp"

namespace chids::cli {

/// Process exit status for each error kind. 0 is success, 1 an unexpected
/// failure, 2 a usage or configuration problem.
int exit_code_for(ErrorCode code) noexcept;

/// Where the anomaly verdicts for `detect` come from. With neither a stream
/// nor a flags file, and no oracle, every record is flagged.
struct DetectInput {
  std::filesystem::path records;
  std::optional<std::filesystem::path> events;
  std::optional<std::filesystem::path> flags;
  bool oracle = false;
};

// Each command writes its artifacts under cfg.out and prints `key value`
// lines to `out`. Errors propagate as chids::Error.
void cmd_preprocess(const RunConfig& cfg, std::ostream& out);
void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_evaluate(const RunConfig& cfg, std::ostream& out);
void cmd_detect(const RunConfig& cfg, const DetectInput& input, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, const std::string& scenario, std::ostream& out);
void cmd_report(const RunConfig& cfg, std::ostream& out);

/// Full command line front end; returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chids::cli
