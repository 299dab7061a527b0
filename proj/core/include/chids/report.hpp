#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chids/feature_rank.hpp"
#include "chids/metrics.hpp"
#include "chids/preprocess.hpp"

namespace chids {

struct ModelResult {
  std::string name;
  std::size_t features = 0;
  ConfusionMatrix matrix;
  MetricsReport metrics;
};

struct ReportInputs {
  std::vector<ModelResult> models;
  std::vector<FeatureScore> ranking;
  std::optional<SplitManifest> manifest;
};

/// Published figures for earlier systems, shown beside measured rows in the
/// plot data. They are quoted, never recomputed here.
struct ReferenceSystem {
  std::string_view name;
  std::size_t features;
  double detection_rate;
  double false_alarm_rate;
  std::string_view complexity;
  double train_seconds;
  double test_seconds;
};

std::span<const ReferenceSystem> reference_systems() noexcept;

enum class ReportFormat : std::uint8_t { TableText, Structured, PlotData };

std::string_view to_string(ReportFormat f) noexcept;
/// "table-text", "structured" or "plot-data"; throws InvalidConfig.
ReportFormat parse_report_format(std::string_view name);

// Deterministic writers. Nothing below prints a timing except the two
// timing writers.
void write_metrics_table(std::ostream& out, std::span<const ModelResult> models);
void write_confusion_tables(std::ostream& out, std::span<const ModelResult> models);
void write_split_table(std::ostream& out, const SplitManifest& manifest);
void write_metrics_json(std::ostream& out, const ReportInputs& inputs);
void write_rank_curve(std::ostream& out, std::span<const FeatureScore> scores);
void write_detection_bars(std::ostream& out, std::span<const ModelResult> models);
void write_false_alarm_bars(std::ostream& out, std::span<const ModelResult> models);

void write_timings(std::ostream& out, std::span<const ModelResult> models);
void write_time_bars(std::ostream& out, std::span<const ModelResult> models);

/// True for timing files: timings*.tsv and plot_time.tsv.
bool is_timing_artifact(const std::filesystem::path& file);

/// Writes the files for one format into `dir` and returns their paths.
/// Throws IoError when a file cannot be written.
std::vector<std::filesystem::path> emit_report(const ReportInputs& inputs, ReportFormat format,
                                               const std::filesystem::path& dir);

}  // namespace chids
