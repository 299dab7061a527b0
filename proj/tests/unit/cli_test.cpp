#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "chids/error.hpp"
#include "chids/report.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "fixtures.hpp"

namespace chids {
namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "chids");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  for (std::string k, v; in >> k >> v;) kv[k] = v;
  return kv;
}

// Fingerprints of every non-timing artifact under `dir`, keyed by relative path.
std::map<std::string, std::string> fingerprints(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || is_timing_artifact(e.path())) continue;
    out[std::filesystem::relative(e.path(), dir).string()] = testing::file_fingerprint(e.path());
  }
  return out;
}

const std::vector<std::string> kSmallSplit{"--set", "split.train_size=2000", "--set", "split.test_size=1000"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

TEST(RunConfigTest, WriteParseRoundTrip) {
  cli::RunConfig cfg;
  cfg.apply_override("seed=42");
  cfg.apply_override("select.k=6");
  cfg.apply_override("select.method=igr");
  cfg.apply_override("prune=none");
  cfg.apply_override("anomaly.window=4.5");
  cfg.apply_override("pipeline.policy=trust-misuse");
  cfg.apply_override("split.minority=Probe,U2R");
  std::stringstream buf;
  cfg.write(buf);
  const auto back = cli::parse_config(buf);
  std::ostringstream again;
  back.write(again);
  EXPECT_EQ(buf.str(), again.str());
  EXPECT_EQ(back.split.seed, 42u);
  EXPECT_EQ(back.select_k, 6u);
  EXPECT_TRUE(back.prune.empty());
  EXPECT_DOUBLE_EQ(back.anomaly.window, 4.5);
  EXPECT_EQ(back.policy, DecisionPolicy::TrustMisuse);
  EXPECT_EQ(back.split.minority, (std::vector<AttackClass>{AttackClass::Probe, AttackClass::U2R}));
}

TEST(RunConfigTest, RejectsBadInput) {
  cli::RunConfig cfg;
  EXPECT_THROW(cfg.set("no.such.key", "1"), Error);
  EXPECT_THROW(cfg.set("select.k", "many"), Error);
  EXPECT_THROW(cfg.apply_override("missing-equals"), Error);
  std::istringstream in("# comment\nthreads = 3\n\nselect.k = 2\n");
  const auto parsed = cli::parse_config(in);
  EXPECT_EQ(parsed.threads, 3u);
  EXPECT_EQ(parsed.select_k, 2u);
  EXPECT_THROW(cli::load_config("/nonexistent/run.cfg"), Error);
}

TEST(Cli, ExitCodesFollowErrorKinds) {
  testing::TempDir dir;
  EXPECT_EQ(run_cli({"--help"}).status, 0);
  EXPECT_EQ(run_cli({"bogus-command"}).status, 2);
  EXPECT_EQ(run_cli({"--set", "nope=1", "simulate", "benign"}).status, 2);
  EXPECT_EQ(run_cli({"--out", dir.path().string(), "simulate", "nonsense"}).status, 8);
  const auto missing = run_cli({"--out", dir.path().string(), "train"});
  EXPECT_EQ(missing.status, 7);
  EXPECT_NE(missing.err.find("chids preprocess"), std::string::npos);
  EXPECT_EQ(run_cli({"--out", dir.path().string(), "preprocess", "--dataset", "/nonexistent/kdd.gz"}).status, 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::UnorderedStream), 9);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::InfeasibleSplit), 5);
}

TEST(Cli, InfeasibleSplitIsReported) {
  testing::TempDir dir;
  testing::write_synthetic_kdd(dir / "kdd.txt", {.normal = 100, .dos = 50, .probe = 10, .r2l = 5, .u2r = 2});
  const auto r = run_cli({"--out", (dir / "out").string(), "preprocess", "--dataset", (dir / "kdd.txt").string()});
  EXPECT_EQ(r.status, 5) << r.err;
}

TEST(Cli, SimulateWritesStreamAndVerdicts) {
  testing::TempDir dir;
  const auto r = run_cli({"--out", dir.path().string(), "--seed", "3", "simulate", "jamming"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto kv = key_values(r.out);
  EXPECT_NE(kv.at("rule.Jamming"), "0");
  EXPECT_TRUE(std::filesystem::exists(dir / "events_jamming.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "verdicts_jamming.tsv"));
  const auto quiet = run_cli({"--out", dir.path().string(), "simulate", "benign"});
  EXPECT_EQ(key_values(quiet.out).at("verdicts"), "0");
}

class CliEndToEnd : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    testing::write_synthetic_kdd(*dir_ / "kdd.txt", {});
  }
  static void TearDownTestSuite() { delete dir_; }

  static std::vector<std::string> base(const std::filesystem::path& out, unsigned threads) {
    return with({"--out", out.string(), "--threads", std::to_string(threads)}, kSmallSplit);
  }
  static int full_run(const std::filesystem::path& out, unsigned threads) {
    const auto b = base(out, threads);
    for (auto cmd : {std::vector<std::string>{"preprocess", "--dataset", (*dir_ / "kdd.txt").string()},
                     std::vector<std::string>{"train"}, std::vector<std::string>{"evaluate"}}) {
      const auto r = run_cli(with(b, cmd));
      if (r.status != 0) {
        ADD_FAILURE() << cmd[0] << ": " << r.err;
        return r.status;
      }
    }
    return 0;
  }

  static testing::TempDir* dir_;
};
testing::TempDir* CliEndToEnd::dir_ = nullptr;

TEST_F(CliEndToEnd, PipelineProducesArtifactsAndMetrics) {
  const auto out = *dir_ / "run";
  const auto b = base(out, 1);
  const auto pre = run_cli(with(b, {"preprocess", "--dataset", (*dir_ / "kdd.txt").string()}));
  ASSERT_EQ(pre.status, 0) << pre.err;
  const auto kv = key_values(pre.out);
  EXPECT_EQ(kv.at("train"), "2000");
  EXPECT_EQ(kv.at("test"), "1000");
  for (auto f : {"config.txt", "manifest.txt", "selected_features.txt", "normalizer.txt", "train.cache",
                 "test.cache", "rank_igr.tsv", "rank_chi2.tsv"})
    EXPECT_TRUE(std::filesystem::exists(out / f)) << f;

  const auto train = run_cli(with(b, {"train"}));
  ASSERT_EQ(train.status, 0) << train.err;
  EXPECT_TRUE(std::filesystem::exists(out / "model.txt"));

  const auto eval = run_cli(with(b, {"evaluate"}));
  ASSERT_EQ(eval.status, 0) << eval.err;
  const auto metrics = key_values(eval.out);
  EXPECT_GT(std::stod(metrics.at("detection_rate")), 80.0);
  EXPECT_LT(std::stod(metrics.at("false_alarm_rate")), 10.0);
  for (auto f : {"metrics.txt", "confusion.txt", "split_table.txt", "metrics.json", "plot_rank.tsv",
                 "plot_detection.tsv", "plot_false_alarm.tsv", "plot_time.tsv"})
    EXPECT_TRUE(std::filesystem::exists(out / "reports" / f)) << f;

  const auto rep = run_cli(with(b, {"report"}));
  EXPECT_EQ(rep.status, 0) << rep.err;
}

TEST_F(CliEndToEnd, DetectCallsMisuseOnlyForFlaggedRecords) {
  const auto out = *dir_ / "detect";
  ASSERT_EQ(full_run(out, 2), 0);
  testing::write_synthetic_kdd(*dir_ / "traffic.txt",
                               {.normal = 60, .dos = 30, .probe = 6, .r2l = 3, .u2r = 1, .duplicate_fraction = 0, .seed = 99});
  {
    std::ofstream flags(*dir_ / "flags.txt");
    for (int i = 0; i < 100; ++i) flags << (i % 20 == 7 ? "1\n" : "0\n");
  }
  const auto b = base(out, 2);
  const auto r = run_cli(with(b, {"detect", "--records", (*dir_ / "traffic.txt").string(), "--flags",
                                  (*dir_ / "flags.txt").string()}));
  ASSERT_EQ(r.status, 0) << r.err;
  const auto kv = key_values(r.out);
  EXPECT_EQ(kv.at("records"), "100");
  EXPECT_EQ(kv.at("flagged"), "5");
  EXPECT_EQ(kv.at("misuse_invocations"), "5");

  std::ifstream alerts(out / "alerts.log");
  std::size_t lines = 0;
  for (std::string line; std::getline(alerts, line);) ++lines;
  EXPECT_EQ(std::to_string(lines), kv.at("alerts"));

  {
    std::ofstream shortflags(*dir_ / "short.txt");
    shortflags << "1\n0\n";
  }
  const auto mismatch = run_cli(with(b, {"detect", "--records", (*dir_ / "traffic.txt").string(), "--flags",
                                         (*dir_ / "short.txt").string()}));
  EXPECT_EQ(mismatch.status, 6);
}

TEST_F(CliEndToEnd, RerunsAndThreadCountsGiveIdenticalArtifacts) {
  const auto a = *dir_ / "a", b = *dir_ / "b", c = *dir_ / "c";
  ASSERT_EQ(full_run(a, 1), 0);
  ASSERT_EQ(full_run(b, 1), 0);
  ASSERT_EQ(full_run(c, 8), 0);
  const auto fa = fingerprints(a);
  EXPECT_GT(fa.size(), 10u);
  EXPECT_EQ(fa, fingerprints(b));
  EXPECT_EQ(fa, fingerprints(c));
}

}  // namespace
}  // namespace chids
