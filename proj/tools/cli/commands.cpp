#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "chids/anomaly.hpp"
#include "chids/dataset_cache.hpp"
#include "chids/decision_tree.hpp"
#include "chids/event_stream.hpp"
#include "chids/feature_rank.hpp"
#include "chids/model_bundle.hpp"
#include "chids/parallel.hpp"
#include "chids/part.hpp"
#include "chids/pipeline.hpp"
#include "chids/report.hpp"

namespace chids::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kTrainCache = "train.cache";
constexpr const char* kTestCache = "test.cache";
constexpr const char* kManifest = "manifest.txt";
constexpr const char* kNormalizer = "normalizer.txt";
constexpr const char* kRankIgr = "rank_igr.tsv";
constexpr const char* kRankChi2 = "rank_chi2.tsv";
constexpr const char* kRankIgrPruned = "rank_igr_pruned.tsv";
constexpr const char* kSelected = "selected_features.txt";
constexpr const char* kModel = "model.txt";
constexpr const char* kTrainTimings = "timings_train.tsv";

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

fs::path require(const RunConfig& cfg, const char* name, const char* producer) {
  const auto path = cfg.out / name;
  if (!fs::exists(path))
    throw Error(ErrorCode::MissingArtifact, path.string() + " not found; run `chids " +
                                                std::string(producer) + "` first");
  return path;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return in;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LoadOptions load_options(const RunConfig& cfg) {
  LoadOptions opts;
  opts.policy = cfg.ingest_strict ? SymbolPolicy::Strict : SymbolPolicy::Grow;
  opts.error_budget = cfg.ingest_error_budget;
  return opts;
}

double read_train_seconds(const RunConfig& cfg) {
  std::ifstream in(cfg.out / kTrainTimings);
  std::string header, name;
  double train = 0.0, test = 0.0;
  if (in && std::getline(in, header) && (in >> name >> train >> test)) return train;
  return 0.0;
}

ReportInputs collect_report(const RunConfig& cfg, bool require_model) {
  ReportInputs inputs;
  {
    auto in = open_input(require(cfg, kManifest, "preprocess"));
    inputs.manifest = SplitManifest::read(in);
  }
  {
    auto in = open_input(require(cfg, kRankIgr, "preprocess"));
    inputs.ranking = read_rank_report(in);
  }
  if (!require_model && !fs::exists(cfg.out / kModel)) return inputs;

  const auto model = ModelBundle::load(require(cfg, kModel, "train"));
  const Dataset train = read_dataset_cache(require(cfg, kTrainCache, "preprocess"));
  const Dataset test = read_dataset_cache(require(cfg, kTestCache, "preprocess"));

  auto add = [&](std::string name, const Classifier& clf, double train_seconds) {
    auto ev = evaluate(clf, test, cfg.threads);
    ev.report.train_seconds = train_seconds;
    inputs.models.push_back({std::move(name), clf.feature_count(), ev.matrix, ev.report});
  };
  add("PART", model.rules, read_train_seconds(cfg));

  auto start = std::chrono::steady_clock::now();
  const DecisionTree tree = build_tree(train, cfg.part);
  add("C4.5 tree", tree, seconds_since(start));

  start = std::chrono::steady_clock::now();
  const MajorityBaseline majority = train_majority_baseline(train);
  add("Majority", majority, seconds_since(start));
  return inputs;
}

void emit_all(const ReportInputs& inputs, const RunConfig& cfg, std::ostream& out) {
  const auto dir = cfg.out / "reports";
  for (auto format : {ReportFormat::TableText, ReportFormat::Structured, ReportFormat::PlotData})
    for (const auto& path : emit_report(inputs, format, dir)) out << "wrote " << path.string() << '\n';
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
      return 2;
    case ErrorCode::IoError:
    case ErrorCode::SinkUnavailable:
      return 3;
    case ErrorCode::FieldCountMismatch:
    case ErrorCode::NumericParseError:
    case ErrorCode::UnknownNominalSymbol:
    case ErrorCode::UnknownLabel:
    case ErrorCode::ParseErrors:
    case ErrorCode::FormatError:
      return 4;
    case ErrorCode::InfeasibleSplit:
    case ErrorCode::EmptyTestSet:
      return 5;
    case ErrorCode::SchemaMismatch:
    case ErrorCode::UnknownFeatureName:
      return 6;
    case ErrorCode::MissingArtifact:
      return 7;
    case ErrorCode::UnknownScenario:
      return 8;
    case ErrorCode::UnorderedStream:
      return 9;
  }
  return 1;
}

void cmd_preprocess(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Dataset raw =
      load_dataset(cfg.dataset, FeatureSchema::kdd(), ClassTaxonomy::kdd(), load_options(cfg));
  const Dataset unique = dedupe(raw);
  SplitResult split = stratified_split(unique, cfg.split);
  split.manifest.raw_records = raw.size();
  split.manifest.raw_per_class = raw.class_counts();

  const Discretization full_bins = discretize(split.train, cfg.threads);
  const auto igr_full =
      rank_features(split.train, full_bins, RankMethod::InfoGainRatio, cfg.threads);

  const Dataset pruned_train = prune_features(split.train, cfg.prune);
  const Dataset pruned_test = prune_features(split.test, cfg.prune);
  const Discretization pruned_bins = discretize(pruned_train, cfg.threads);
  const auto chi2 = rank_features(pruned_train, pruned_bins, RankMethod::ChiSquared, cfg.threads);
  std::vector<FeatureScore> igr_pruned;
  if (cfg.select_method == RankMethod::InfoGainRatio)
    igr_pruned = rank_features(pruned_train, pruned_bins, RankMethod::InfoGainRatio, cfg.threads);
  const auto selected =
      select_top_k(cfg.select_method == RankMethod::ChiSquared ? chi2 : igr_pruned, cfg.select_k);

  const Dataset train_sel = project_features(pruned_train, selected);
  const Dataset test_sel = project_features(pruned_test, selected);
  const NormalizationStats stats = fit_normalizer(train_sel, cfg.threads);
  const Dataset train = apply_normalizer(train_sel, stats);
  const Dataset test = apply_normalizer(test_sel, stats);

  ensure_dir(cfg.out);
  write_file(cfg.out / "config.txt", [&](std::ostream& o) { cfg.write(o, false); });
  write_file(cfg.out / kManifest, [&](std::ostream& o) { split.manifest.write(o); });
  write_file(cfg.out / kRankIgr, [&](std::ostream& o) { write_rank_report(o, igr_full); });
  write_file(cfg.out / kRankChi2, [&](std::ostream& o) { write_rank_report(o, chi2); });
  if (!igr_pruned.empty())
    write_file(cfg.out / kRankIgrPruned, [&](std::ostream& o) { write_rank_report(o, igr_pruned); });
  write_file(cfg.out / kSelected, [&](std::ostream& o) {
    for (const auto& name : selected) o << name << '\n';
  });
  write_file(cfg.out / kNormalizer, [&](std::ostream& o) { stats.write(o); });
  write_dataset_cache(cfg.out / kTrainCache, train);
  write_dataset_cache(cfg.out / kTestCache, test);

  double igr_sum = 0.0;
  for (const auto& s : igr_full) igr_sum += s.score;
  out << "records_raw " << raw.size() << '\n';
  out << "records_unique " << unique.size() << '\n';
  out << "reduction_rate " << fixed(100.0 * reduction_rate(raw.size(), unique.size()), 2) << '\n';
  out << "train " << train.size() << '\n';
  out << "test " << test.size() << '\n';
  out << "igr_mean " << fixed(igr_full.empty() ? 0.0 : igr_sum / double(igr_full.size()), 4) << '\n';
  out << "selected ";
  for (std::size_t i = 0; i < selected.size(); ++i) out << (i ? "," : "") << selected[i];
  out << '\n';
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Dataset train = read_dataset_cache(require(cfg, kTrainCache, "preprocess"));
  NormalizationStats stats;
  {
    auto in = open_input(require(cfg, kNormalizer, "preprocess"));
    stats = NormalizationStats::read(in);
  }
  const auto start = std::chrono::steady_clock::now();
  RuleSet rules = train_part(train, cfg.part);
  const double seconds = seconds_since(start);

  const ModelBundle bundle{std::move(stats), std::move(rules)};
  bundle.save(cfg.out / kModel);
  write_file(cfg.out / kTrainTimings, [&](std::ostream& o) {
    o << "model\ttrain_seconds\ttest_seconds\n";
    o << "PART\t" << fixed(seconds, 6) << '\t' << fixed(0.0, 6) << '\n';
  });
  out << "rules " << bundle.rules.rules().size() << '\n';
  out << "model " << (cfg.out / kModel).string() << '\n';
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const ReportInputs inputs = collect_report(cfg, true);
  const auto& part = inputs.models.front().metrics;
  out << "detection_rate " << fixed(part.detection_rate(), 4) << '\n';
  out << "false_alarm_rate " << fixed(part.false_alarm_rate(), 4) << '\n';
  out << "accuracy " << fixed(part.accuracy.percent(), 4) << '\n';
  emit_all(inputs, cfg, out);
}

void cmd_report(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  emit_all(collect_report(cfg, false), cfg, out);
}

void cmd_detect(const RunConfig& cfg, const DetectInput& input, std::ostream& out) {
  cfg.validate();
  const ModelBundle model = ModelBundle::load(require(cfg, kModel, "train"));
  const Dataset records =
      load_dataset(input.records, FeatureSchema::kdd(), ClassTaxonomy::kdd(), load_options(cfg));

  std::vector<std::vector<double>> values(records.size());
  parallel_for(records.size(), cfg.threads,
               [&](std::size_t i) { values[i] = model.prepare(records.records[i], records.schema); });

  VerdictIndex verdicts;
  std::vector<double> timestamps;
  if (input.events) {
    const auto events = read_events(*input.events);
    if (events.size() != records.size())
      throw Error(ErrorCode::SchemaMismatch,
                  "event stream has " + std::to_string(events.size()) + " events for " +
                      std::to_string(records.size()) + " records");
    const auto fired = evaluate_stream(events, cfg.anomaly);
    verdicts = VerdictIndex(records.size(), fired);
    timestamps.reserve(events.size());
    for (const auto& e : events) timestamps.push_back(e.timestamp);
  } else if (input.flags) {
    auto in = open_input(*input.flags);
    std::vector<bool> flags;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (line != "0" && line != "1")
        throw Error(ErrorCode::FormatError, "flags file: expected 0 or 1, got '" + line + "'");
      flags.push_back(line == "1");
    }
    if (flags.size() != records.size())
      throw Error(ErrorCode::SchemaMismatch, "flags file does not match the record count");
    verdicts = VerdictIndex::from_flags(std::move(flags));
  } else {
    std::vector<bool> flags(records.size(), true);
    if (input.oracle)
      for (std::size_t i = 0; i < records.size(); ++i) flags[i] = is_attack(records.records[i].category);
    verdicts = VerdictIndex::from_flags(std::move(flags));
  }

  PipelineConfig pc;
  pc.policy = cfg.policy;
  pc.threads = cfg.threads;
  const auto result = run_pipeline(values, verdicts, model.rules, pc, timestamps);

  ensure_dir(cfg.out);
  std::size_t alerts = 0;
  write_file(cfg.out / "alerts.log",
             [&](std::ostream& o) { alerts = emit_alerts(result.dispositions, verdicts, o); });
  write_file(cfg.out / "dispositions.tsv",
             [&](std::ostream& o) { write_dispositions(o, result.dispositions); });

  out << "records " << records.size() << '\n';
  out << "flagged " << verdicts.flagged_count() << '\n';
  out << "misuse_invocations " << result.misuse_invocations << '\n';
  out << "alerts " << alerts << '\n';
}

void cmd_simulate(const RunConfig& cfg, const std::string& scenario, std::ostream& out) {
  cfg.validate();
  const Scenario s = parse_scenario(scenario);
  const auto events = generate_stream(s, cfg.split.seed, cfg.stream);
  const auto verdicts = evaluate_stream(events, cfg.anomaly);

  ensure_dir(cfg.out);
  const std::string name(to_string(s));
  write_file(cfg.out / ("events_" + name + ".txt"), [&](std::ostream& o) { write_events(o, events); });
  write_file(cfg.out / ("verdicts_" + name + ".tsv"),
             [&](std::ostream& o) { write_verdicts(o, verdicts); });

  out << "events " << events.size() << '\n';
  out << "verdicts " << verdicts.size() << '\n';
  std::array<std::size_t, kNumAnomalyRules> per_rule{};
  for (const auto& v : verdicts) ++per_rule[static_cast<std::size_t>(v.rule)];
  for (std::size_t r = 0; r < per_rule.size(); ++r)
    if (per_rule[r]) out << "rule." << to_string(static_cast<AnomalyRule>(r)) << ' ' << per_rule[r] << '\n';
}

}  // namespace chids::cli
