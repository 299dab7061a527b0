#include "chids/part.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

#include "chids/dataset_cache.hpp"
#include "chids/error.hpp"

namespace chids {

namespace {

struct PartialNode {
  ClassCounts distribution{};
  AttackClass predicted = AttackClass::Normal;
  bool leaf = true;
  SplitChoice split;
  std::vector<std::unique_ptr<PartialNode>> sons;  // null = never expanded
};

double leaf_estimate(const PartialNode& node, double confidence) {
  const auto& dist = node.distribution;
  const double n = static_cast<double>(std::accumulate(dist.begin(), dist.end(), std::size_t{0}));
  if (n == 0.0) return 0.0;
  const double e = n - static_cast<double>(dist[index_of(node.predicted)]);
  return e + pessimistic_extra_errors(n, e, confidence);
}

std::unique_ptr<PartialNode> expand(const LearningTable& table, std::span<const std::size_t> rows,
                                    const TreeParams& params, const ClassCounts& prior) {
  auto node = std::make_unique<PartialNode>();
  node->distribution = count_classes(table, rows);
  node->predicted = majority_class(node->distribution, prior);
  if (rows.empty()) return node;

  const auto split = choose_split(table, rows, params);
  if (!split) return node;

  node->leaf = false;
  node->split = *split;
  auto subsets = partition_rows(table, rows, *split);
  node->sons.resize(subsets.size());

  std::vector<double> entropy(subsets.size());
  for (std::size_t b = 0; b < subsets.size(); ++b)
    entropy[b] = subsets[b].empty() ? std::numeric_limits<double>::infinity()
                                    : class_entropy(count_classes(table, subsets[b]));

  for (;;) {
    std::size_t next = subsets.size();
    for (std::size_t b = 0; b < subsets.size(); ++b) {
      if (node->sons[b]) continue;
      if (next == subsets.size() || entropy[b] < entropy[next]) next = b;
    }
    if (next == subsets.size()) break;
    node->sons[next] = expand(table, subsets[next], params, prior);
    std::vector<std::size_t>().swap(subsets[next]);
    if (!node->sons[next]->leaf) break;
  }

  const bool all_leaves = std::all_of(node->sons.begin(), node->sons.end(),
                                      [](const auto& s) { return s && s->leaf; });
  if (all_leaves) {
    double subtree = 0.0;
    for (const auto& s : node->sons) subtree += leaf_estimate(*s, params.confidence);
    if (leaf_estimate(*node, params.confidence) <= subtree + 0.1) {
      node->leaf = true;
      node->sons.clear();
    }
  }
  return node;
}

RuleTest branch_test(const SplitChoice& split, std::size_t branch) {
  if (split.kind == FeatureKind::Nominal)
    return {split.feature, TestOp::Equals, static_cast<double>(branch)};
  return {split.feature, branch == 0 ? TestOp::LessEq : TestOp::Greater, split.threshold};
}

void collect_leaves(const PartialNode& node, std::vector<RuleTest>& path,
                    std::vector<PartialLeaf>& out) {
  if (node.leaf) {
    const std::size_t n = std::accumulate(node.distribution.begin(), node.distribution.end(),
                                          std::size_t{0});
    if (n > 0) out.push_back({path, node.distribution, node.predicted});
    return;
  }
  for (std::size_t b = 0; b < node.sons.size(); ++b) {
    if (!node.sons[b]) continue;
    path.push_back(branch_test(node.split, b));
    collect_leaves(*node.sons[b], path, out);
    path.pop_back();
  }
}

bool row_matches(const LearningTable& table, const Rule& rule, std::size_t row) {
  for (const auto& t : rule.tests)
    if (!t.matches(table.columns[t.feature][row])) return false;
  return true;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[noreturn]] void bad_model(const std::string& what) {
  throw Error(ErrorCode::FormatError, "rule list: " + what);
}

constexpr const char* kMagic = "# chids rule list v1";

}  // namespace

bool RuleTest::matches(double v) const noexcept {
  switch (op) {
    case TestOp::Equals: return v == value;
    case TestOp::LessEq: return v <= value;
    case TestOp::Greater: return v > value;
  }
  return false;
}

bool Rule::matches(std::span<const double> values) const noexcept {
  for (const auto& t : tests)
    if (!t.matches(values[t.feature])) return false;
  return true;
}

std::size_t PartialLeaf::coverage() const noexcept {
  return std::accumulate(distribution.begin(), distribution.end(), std::size_t{0});
}

std::vector<RuleTest> simplify_tests(std::span<const RuleTest> tests) {
  std::vector<RuleTest> out;
  for (const auto& t : tests) {
    auto same = std::find_if(out.begin(), out.end(), [&](const RuleTest& o) {
      return o.feature == t.feature && o.op == t.op;
    });
    if (same == out.end()) {
      out.push_back(t);
    } else if (t.op == TestOp::LessEq) {
      same->value = std::min(same->value, t.value);
    } else if (t.op == TestOp::Greater) {
      same->value = std::max(same->value, t.value);
    }
  }
  return out;
}

std::vector<PartialLeaf> grow_partial_tree(const LearningTable& table,
                                           std::span<const std::size_t> rows,
                                           const TreeParams& params, const ClassCounts& prior) {
  const auto root = expand(table, rows, params, prior);
  std::vector<PartialLeaf> leaves;
  std::vector<RuleTest> path;
  collect_leaves(*root, path, leaves);
  return leaves;
}

Rule build_partial_tree_rule(const LearningTable& table, std::span<const std::size_t> rows,
                             const TreeParams& params, const ClassCounts& prior) {
  const auto leaves = grow_partial_tree(table, rows, params, prior);
  if (leaves.empty()) {
    // Only reachable with no rows at all.
    return Rule{{}, majority_class(prior, prior), 0, 0};
  }
  const PartialLeaf* best = &leaves.front();
  for (const auto& leaf : leaves)
    if (leaf.coverage() > best->coverage()) best = &leaf;
  Rule rule;
  rule.tests = simplify_tests(best->path);
  rule.consequent = best->predicted;
  rule.coverage = best->coverage();
  rule.errors = rule.coverage - best->distribution[index_of(best->predicted)];
  return rule;
}

Rule build_partial_tree_rule(const Dataset& residual, const TreeParams& params) {
  const auto table = LearningTable::from(residual);
  std::vector<std::size_t> rows(table.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return build_partial_tree_rule(table, rows, params, count_classes(table, rows));
}

RuleSet train_part(const Dataset& train, const TreeParams& params) {
  const auto table = LearningTable::from(train);
  std::vector<std::size_t> residual(table.rows());
  std::iota(residual.begin(), residual.end(), 0);
  const ClassCounts prior = count_classes(table, residual);

  std::vector<Rule> rules;
  while (!residual.empty()) {
    Rule rule = build_partial_tree_rule(table, residual, params, prior);
    const std::size_t before = residual.size();
    std::erase_if(residual, [&](std::size_t r) { return row_matches(table, rule, r); });
    if (residual.size() == before)
      throw std::logic_error("PART: extracted rule covers no residual record");
    rules.push_back(std::move(rule));
  }
  return RuleSet(train.schema, std::move(rules), majority_class(prior, prior));
}

RuleSet::RuleSet(FeatureSchema schema, std::vector<Rule> rules, AttackClass default_class)
    : schema_(std::move(schema)), rules_(std::move(rules)), default_(default_class) {
  for (const auto& r : rules_)
    for (const auto& t : r.tests)
      if (t.feature >= schema_.size())
        throw Error(ErrorCode::SchemaMismatch, "rule references feature outside the schema");
}

std::optional<std::size_t> RuleSet::first_match(std::span<const double> values) const noexcept {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].matches(values)) return i;
  return std::nullopt;
}

AttackClass RuleSet::predict(std::span<const double> values) const {
  check_width(values, schema_.size());
  if (auto i = first_match(values)) return rules_[*i].consequent;
  return default_;
}

std::string RuleSet::describe(const Rule& rule) const {
  std::string out = "IF ";
  if (rule.tests.empty()) out += "TRUE";
  for (std::size_t i = 0; i < rule.tests.size(); ++i) {
    const auto& t = rule.tests[i];
    if (i) out += " AND ";
    out += schema_[t.feature].name;
    switch (t.op) {
      case TestOp::Equals:
        out += " = ";
        out += t.value >= 0 ? schema_.symbol(t.feature, static_cast<std::size_t>(t.value))
                            : std::string("?");
        break;
      case TestOp::LessEq:
        out += " <= " + format_number(t.value);
        break;
      case TestOp::Greater:
        out += " > " + format_number(t.value);
        break;
    }
  }
  out += " THEN ";
  out += to_string(rule.consequent);
  out += " (cov=" + std::to_string(rule.coverage) + ", err=" + std::to_string(rule.errors) + ")";
  return out;
}

void RuleSet::write(std::ostream& out) const {
  out << kMagic << '\n';
  write_schema_block(out, schema_);
  out << "default " << to_string(default_) << '\n';
  out << "rules " << rules_.size() << '\n';
  for (const auto& r : rules_) out << describe(r) << '\n';
}

RuleSet RuleSet::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) bad_model("missing or unsupported header");
  FeatureSchema schema = read_schema_block(in);

  std::string key, value;
  if (!std::getline(in, line)) bad_model("truncated");
  std::istringstream dl(line);
  if (!(dl >> key >> value) || key != "default") bad_model("expected 'default <class>'");
  const auto fallback = parse_attack_class(value);
  if (!fallback) bad_model("unknown class '" + value + "'");

  std::size_t count = 0;
  if (!std::getline(in, line)) bad_model("truncated");
  std::istringstream cl(line);
  if (!(cl >> key >> count) || key != "rules") bad_model("expected 'rules <n>'");

  std::vector<Rule> rules;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) bad_model("expected " + std::to_string(count) + " rules");
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok != "IF") bad_model("rule must start with IF: " + line);
    Rule rule;
    for (;;) {
      std::string name;
      if (!(ss >> name)) bad_model("unterminated rule: " + line);
      if (name == "TRUE") {
        if (!(ss >> tok) || tok != "THEN") bad_model("expected THEN: " + line);
        break;
      }
      std::string op, operand;
      if (!(ss >> op >> operand)) bad_model("incomplete test: " + line);
      RuleTest t;
      t.feature = schema.find(name).value_or(schema.size());
      if (t.feature == schema.size()) bad_model("unknown feature '" + name + "'");
      if (op == "=") {
        auto code = schema.symbol_code(t.feature, operand);
        if (!code) bad_model("unknown symbol '" + operand + "' for " + name);
        t.op = TestOp::Equals;
        t.value = static_cast<double>(*code);
      } else if (op == "<=" || op == ">") {
        t.op = op == "<=" ? TestOp::LessEq : TestOp::Greater;
        auto [ptr, ec] = std::from_chars(operand.data(), operand.data() + operand.size(), t.value);
        if (ec != std::errc() || ptr != operand.data() + operand.size())
          bad_model("bad threshold '" + operand + "'");
      } else {
        bad_model("unknown operator '" + op + "'");
      }
      rule.tests.push_back(t);
      if (!(ss >> tok)) bad_model("unterminated rule: " + line);
      if (tok == "THEN") break;
      if (tok != "AND") bad_model("expected AND or THEN: " + line);
    }
    std::string cls, cov, err;
    if (!(ss >> cls >> cov >> err)) bad_model("incomplete consequent: " + line);
    const auto consequent = parse_attack_class(cls);
    if (!consequent) bad_model("unknown class '" + cls + "'");
    rule.consequent = *consequent;
    if (std::sscanf(cov.c_str(), "(cov=%zu,", &rule.coverage) != 1 ||
        std::sscanf(err.c_str(), "err=%zu)", &rule.errors) != 1)
      bad_model("bad coverage annotation: " + line);
    rules.push_back(std::move(rule));
  }
  return RuleSet(std::move(schema), std::move(rules), *fallback);
}

}  // namespace chids
