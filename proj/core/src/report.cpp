#include "chids/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>

#include <json.hpp>

#include "chids/error.hpp"

namespace chids {

namespace {

constexpr std::array<ReferenceSystem, 11> kReferences{{
    {"IIDS", 24, 90.96, 2.06, "low", 135.37, 0.29},
    {"GHIDS", 41, 97.65, 3.85, "very high", 1229, 73.45},
    {"NHIDS", 4, 95.37, 2.24, "low", 0.09, 0.01},
    {"ACO-SVM", 25, 98.38, 0.004, "medium", 28.01, 1.44},
    {"GA-SVM", 10, 97.3, 0.02, "high", 68.84, 11.69},
    {"IWD-IDS", 9, 99.41, 1.41, "medium", 69.21, 2.76},
    {"MCFA", 19, 94.74, 2.52, "medium", 0.84, 1.74},
    {"FCL-IDS", 25, 99.16, 0.74, "low", 58.55, 0.08},
    {"I-NSGA-III", 20, 99.37, 0.06, "medium", 30.2, 1.06},
    {"KBIDS", 13, 97.85, 1.87, "medium", 84.3, 3.83},
    {"Hybrid IDS (published)", 4, 99.59, 0.24, "low", 0.76, 0.025},
}};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string_view s, std::size_t width, bool right = false) {
  std::string out;
  if (right && s.size() < width) out.append(width - s.size(), ' ');
  out += s;
  if (!right && s.size() < width) out.append(width - s.size(), ' ');
  return out;
}

nlohmann::ordered_json ratio_json(const Ratio& r) {
  nlohmann::ordered_json j;
  j["numerator"] = r.num;
  j["denominator"] = r.den;
  j["percent"] = r.percent();
  return j;
}

}  // namespace

std::span<const ReferenceSystem> reference_systems() noexcept { return kReferences; }

std::string_view to_string(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::TableText: return "table-text";
    case ReportFormat::Structured: return "structured";
    case ReportFormat::PlotData: return "plot-data";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view name) {
  for (auto f : {ReportFormat::TableText, ReportFormat::Structured, ReportFormat::PlotData})
    if (to_string(f) == name) return f;
  throw Error(ErrorCode::InvalidConfig, "unknown report format: " + std::string(name));
}

void write_metrics_table(std::ostream& out, std::span<const ModelResult> models) {
  const std::array<std::string_view, 9> head{"model",    "features", "attacks", "detected", "DR %",
                                             "normals",  "false alarms", "FAR %", "accuracy %"};
  const std::array<std::size_t, 9> width{24, 8, 8, 8, 7, 8, 12, 6, 10};
  for (std::size_t i = 0; i < head.size(); ++i)
    out << (i ? "  " : "") << pad(head[i], width[i], i > 0);
  out << '\n';
  for (const auto& m : models) {
    const auto& r = m.metrics;
    const std::array<std::string, 9> cells{m.name,
                                           std::to_string(m.features),
                                           std::to_string(r.attacks),
                                           std::to_string(r.detection.num),
                                           fixed(r.detection_rate(), 2),
                                           std::to_string(r.normals),
                                           std::to_string(r.false_alarm.num),
                                           fixed(r.false_alarm_rate(), 2),
                                           fixed(r.accuracy.percent(), 2)};
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << (i ? "  " : "") << pad(cells[i], width[i], i > 0);
    out << '\n';
  }
}

void write_confusion_tables(std::ostream& out, std::span<const ModelResult> models) {
  for (const auto& m : models) {
    out << m.name << " (rows actual, columns predicted)\n";
    out << pad("", 8);
    for (AttackClass p : kAllClasses) out << pad(to_string(p), 9, true);
    out << pad("recall %", 10, true) << '\n';
    for (AttackClass a : kAllClasses) {
      out << pad(to_string(a), 8);
      for (AttackClass p : kAllClasses) out << pad(std::to_string(m.matrix.at(a, p)), 9, true);
      out << pad(fixed(m.metrics.recall[index_of(a)].percent(), 2), 10, true) << '\n';
    }
    out << pad("prec %", 8);
    for (AttackClass p : kAllClasses)
      out << pad(fixed(m.metrics.precision[index_of(p)].percent(), 2), 9, true);
    out << "\n\n";
  }
}

void write_split_table(std::ostream& out, const SplitManifest& manifest) {
  auto share = [](std::size_t n, std::size_t total) {
    return total == 0 ? std::string("-") : fixed(100.0 * double(n) / double(total), 2);
  };
  std::size_t dedup_total = 0, train_total = 0, test_total = 0;
  for (const auto& a : manifest.per_class) {
    dedup_total += a.available;
    train_total += a.train;
    test_total += a.test;
  }
  out << pad("category", 9) << pad("total", 9, true) << pad("ratio %", 9, true)
      << pad("dedup", 9, true) << pad("ratio %", 9, true) << pad("train", 9, true)
      << pad("ratio %", 9, true) << pad("test", 9, true) << pad("ratio %", 9, true) << '\n';
  auto row = [&](std::string_view name, std::size_t raw, std::size_t dedup, std::size_t train,
                 std::size_t test) {
    out << pad(name, 9) << pad(std::to_string(raw), 9, true)
        << pad(share(raw, manifest.raw_records), 9, true) << pad(std::to_string(dedup), 9, true)
        << pad(share(dedup, dedup_total), 9, true) << pad(std::to_string(train), 9, true)
        << pad(share(train, train_total), 9, true) << pad(std::to_string(test), 9, true)
        << pad(share(test, test_total), 9, true) << '\n';
  };
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto& a = manifest.per_class[c];
    row(to_string(class_at(c)), manifest.raw_per_class[c], a.available, a.train, a.test);
  }
  row("total", manifest.raw_records, dedup_total, train_total, test_total);
}

void write_metrics_json(std::ostream& out, const ReportInputs& inputs) {
  nlohmann::ordered_json doc;
  doc["models"] = nlohmann::ordered_json::array();
  for (const auto& m : inputs.models) {
    const auto& r = m.metrics;
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["features"] = m.features;
    j["records"] = r.records;
    j["attacks"] = r.attacks;
    j["normals"] = r.normals;
    j["detection_rate"] = ratio_json(r.detection);
    j["false_alarm_rate"] = ratio_json(r.false_alarm);
    j["accuracy"] = ratio_json(r.accuracy);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const std::string name(to_string(class_at(c)));
      j["recall"][name] = ratio_json(r.recall[c]);
      j["precision"][name] = ratio_json(r.precision[c]);
    }
    j["confusion"] = m.matrix.counts;
    doc["models"].push_back(std::move(j));
  }
  doc["ranking"] = nlohmann::ordered_json::array();
  for (const auto& s : inputs.ranking) {
    nlohmann::ordered_json j;
    j["feature"] = s.feature;
    j["method"] = to_string(s.method);
    j["score"] = s.score;
    doc["ranking"].push_back(std::move(j));
  }
  if (inputs.manifest) {
    const auto& mf = *inputs.manifest;
    nlohmann::ordered_json j;
    j["seed"] = mf.seed;
    j["source_records"] = mf.source_records;
    j["raw_records"] = mf.raw_records;
    j["train_size"] = mf.train_size;
    j["test_size"] = mf.test_size;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const auto& a = mf.per_class[c];
      j["classes"][std::string(to_string(class_at(c)))] = {{"raw", mf.raw_per_class[c]},
                                                           {"available", a.available},
                                                           {"train", a.train},
                                                           {"test", a.test}};
    }
    doc["split"] = std::move(j);
  }
  out << doc.dump(2) << '\n';
}

void write_rank_curve(std::ostream& out, std::span<const FeatureScore> scores) {
  double sum = 0.0;
  for (const auto& s : scores) sum += s.score;
  const double mean = scores.empty() ? 0.0 : sum / double(scores.size());
  out << "rank\tfeature\tmethod\tscore\tmean\n";
  for (std::size_t i = 0; i < scores.size(); ++i)
    out << i + 1 << '\t' << scores[i].feature << '\t' << to_string(scores[i].method) << '\t'
        << fixed(scores[i].score, 10) << '\t' << fixed(mean, 10) << '\n';
}

namespace {

void bars(std::ostream& out, std::string_view column, std::span<const ModelResult> models,
          const std::function<double(const MetricsReport&)>& measured,
          const std::function<double(const ReferenceSystem&)>& reported) {
  out << "system\tsource\t" << column << '\n';
  if (models.empty()) return;
  for (const auto& ref : kReferences)
    out << ref.name << "\treported\t" << fixed(reported(ref), 4) << '\n';
  for (const auto& m : models) out << m.name << "\tmeasured\t" << fixed(measured(m.metrics), 4) << '\n';
}

}  // namespace

void write_detection_bars(std::ostream& out, std::span<const ModelResult> models) {
  bars(out, "detection_rate", models, [](const MetricsReport& r) { return r.detection_rate(); },
       [](const ReferenceSystem& r) { return r.detection_rate; });
}

void write_false_alarm_bars(std::ostream& out, std::span<const ModelResult> models) {
  bars(out, "false_alarm_rate", models,
       [](const MetricsReport& r) { return r.false_alarm_rate(); },
       [](const ReferenceSystem& r) { return r.false_alarm_rate; });
}

void write_time_bars(std::ostream& out, std::span<const ModelResult> models) {
  bars(out, "test_seconds", models, [](const MetricsReport& r) { return r.test_seconds; },
       [](const ReferenceSystem& r) { return r.test_seconds; });
}

void write_timings(std::ostream& out, std::span<const ModelResult> models) {
  out << "model\ttrain_seconds\ttest_seconds\n";
  for (const auto& m : models)
    out << m.name << '\t' << fixed(m.metrics.train_seconds, 6) << '\t'
        << fixed(m.metrics.test_seconds, 6) << '\n';
}

bool is_timing_artifact(const std::filesystem::path& file) {
  const auto name = file.filename().string();
  return name.starts_with("timings") || name == "plot_time.tsv";
}

std::vector<std::filesystem::path> emit_report(const ReportInputs& inputs, ReportFormat format,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](std::string_view name, const std::function<void(std::ostream&)>& body) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
    written.push_back(path);
  };

  switch (format) {
    case ReportFormat::TableText:
      emit("metrics.txt", [&](std::ostream& o) { write_metrics_table(o, inputs.models); });
      emit("confusion.txt", [&](std::ostream& o) { write_confusion_tables(o, inputs.models); });
      if (inputs.manifest)
        emit("split_table.txt", [&](std::ostream& o) { write_split_table(o, *inputs.manifest); });
      emit("timings.tsv", [&](std::ostream& o) { write_timings(o, inputs.models); });
      break;
    case ReportFormat::Structured:
      emit("metrics.json", [&](std::ostream& o) { write_metrics_json(o, inputs); });
      break;
    case ReportFormat::PlotData:
      emit("plot_rank.tsv", [&](std::ostream& o) { write_rank_curve(o, inputs.ranking); });
      emit("plot_detection.tsv", [&](std::ostream& o) { write_detection_bars(o, inputs.models); });
      emit("plot_false_alarm.tsv",
           [&](std::ostream& o) { write_false_alarm_bars(o, inputs.models); });
      emit("plot_time.tsv", [&](std::ostream& o) { write_time_bars(o, inputs.models); });
      break;
  }
  return written;
}

}  // namespace chids
