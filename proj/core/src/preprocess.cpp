#include "chids/preprocess.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "chids/error.hpp"
#include "chids/parallel.hpp"
#include "chids/random.hpp"

namespace chids {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

struct RecordHash {
  const std::vector<KddRecord>* records;
  std::size_t operator()(std::size_t i) const {
    const auto& r = (*records)[i];
    std::uint64_t h = std::hash<std::string>{}(r.label);
    // +0.0 folds -0.0 onto 0.0 so equal values hash equally.
    for (double v : r.values) h = mix(h, std::bit_cast<std::uint64_t>(v + 0.0));
    return static_cast<std::size_t>(h);
  }
};

struct RecordEq {
  const std::vector<KddRecord>* records;
  bool operator()(std::size_t a, std::size_t b) const {
    const auto& ra = (*records)[a];
    const auto& rb = (*records)[b];
    return ra.label == rb.label && ra.values == rb.values;
  }
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::FormatError, "normalizer: bad number '" + s + "'");
  return v;
}

Dataset select_columns(const Dataset& data, const std::vector<std::size_t>& columns) {
  std::vector<FeatureDef> defs;
  defs.reserve(columns.size());
  for (std::size_t c : columns) defs.push_back(data.schema[c]);
  Dataset out;
  out.schema = FeatureSchema(std::move(defs));
  out.records.reserve(data.size());
  for (const auto& r : data.records) {
    KddRecord rec;
    rec.values.reserve(columns.size());
    for (std::size_t c : columns) rec.values.push_back(r.values[c]);
    rec.label = r.label;
    rec.category = r.category;
    out.records.push_back(std::move(rec));
  }
  return out;
}

void check_layout(const FeatureSchema& schema, const NormalizationStats& stats) {
  if (stats.features.size() != schema.size())
    throw Error(ErrorCode::SchemaMismatch, "normalizer fitted on " +
                                               std::to_string(stats.features.size()) +
                                               " features, data has " +
                                               std::to_string(schema.size()));
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (stats.features[i].name != schema[i].name || stats.features[i].kind != schema[i].kind)
      throw Error(ErrorCode::SchemaMismatch,
                  "normalizer feature " + std::to_string(i) + " is '" + stats.features[i].name +
                      "', data has '" + schema[i].name + "'");
  }
}

}  // namespace

Dataset dedupe(const Dataset& data) {
  std::unordered_set<std::size_t, RecordHash, RecordEq> seen(
      data.size() * 2 + 1, RecordHash{&data.records}, RecordEq{&data.records});
  Dataset out;
  out.schema = data.schema;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (seen.insert(i).second) out.records.push_back(data.records[i]);
  return out;
}

double reduction_rate(std::size_t before, std::size_t after) noexcept {
  if (before == 0) return 0.0;
  return 1.0 - static_cast<double>(after) / static_cast<double>(before);
}

std::size_t minority_train_share(std::size_t n) noexcept { return (4 * n + 3) / 6; }

std::vector<std::size_t> apportion(std::size_t slots, std::span<const std::size_t> weights) {
  std::vector<std::size_t> out(weights.size(), 0);
  const std::uint64_t total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
  if (total == 0 || slots == 0) return out;

  std::vector<std::uint64_t> remainder(weights.size(), 0);
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(slots) * weights[i];
    out[i] = static_cast<std::size_t>(scaled / total);
    remainder[i] = scaled % total;
    given += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; given < slots; ++k, ++given) ++out[order[k % order.size()]];
  return out;
}

SplitResult stratified_split(const Dataset& data, const SplitSpec& spec) {
  if (spec.train_size + spec.test_size > data.size())
    throw Error(ErrorCode::InfeasibleSplit,
                "requested " + std::to_string(spec.train_size) + "+" +
                    std::to_string(spec.test_size) + " records from " +
                    std::to_string(data.size()));

  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < data.size(); ++i)
    members[index_of(data.records[i].category)].push_back(i);

  auto is_minority = [&](std::size_t c) {
    return std::find(spec.minority.begin(), spec.minority.end(), class_at(c)) !=
           spec.minority.end();
  };

  SplitManifest manifest;
  manifest.seed = spec.seed;
  manifest.source_records = data.size();
  manifest.train_size = spec.train_size;
  manifest.test_size = spec.test_size;
  for (AttackClass c : kAllClasses)
    if (is_minority(index_of(c))) manifest.minority.push_back(c);

  std::size_t minority_train = 0;
  std::size_t minority_test = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& alloc = manifest.per_class[c];
    alloc.available = members[c].size();
    if (!is_minority(c)) continue;
    if (spec.test_size == 0)
      alloc.train = alloc.available;
    else if (spec.train_size == 0)
      alloc.test = alloc.available;
    else
      alloc.train = minority_train_share(alloc.available);
    if (spec.test_size != 0) alloc.test = alloc.available - alloc.train;
    minority_train += alloc.train;
    minority_test += alloc.test;
  }
  if (minority_train > spec.train_size || minority_test > spec.test_size)
    throw Error(ErrorCode::InfeasibleSplit,
                "minority classes need " + std::to_string(minority_train) + " train / " +
                    std::to_string(minority_test) + " test records");

  std::vector<std::size_t> majority;
  std::vector<std::size_t> weights;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (is_minority(c)) continue;
    majority.push_back(c);
    weights.push_back(members[c].size());
  }
  const std::size_t train_slots = spec.train_size - minority_train;
  const std::size_t test_slots = spec.test_size - minority_test;
  const auto train_alloc = apportion(train_slots, weights);
  const auto test_alloc = apportion(test_slots, weights);
  std::size_t train_given = 0;
  std::size_t test_given = 0;
  for (std::size_t k = 0; k < majority.size(); ++k) {
    auto& alloc = manifest.per_class[majority[k]];
    alloc.train = train_alloc[k];
    alloc.test = test_alloc[k];
    train_given += alloc.train;
    test_given += alloc.test;
    if (alloc.train + alloc.test > alloc.available)
      throw Error(ErrorCode::InfeasibleSplit,
                  std::string("class ") + std::string(to_string(class_at(majority[k]))) +
                      " has " + std::to_string(alloc.available) + " records, needs " +
                      std::to_string(alloc.train + alloc.test));
  }
  if (train_given != train_slots || test_given != test_slots)
    throw Error(ErrorCode::InfeasibleSplit, "no proportional classes left to fill the split");

  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto pool = members[c];
    rng.shuffle(std::span(pool));
    const auto& alloc = manifest.per_class[c];
    train_idx.insert(train_idx.end(), pool.begin(), pool.begin() + alloc.train);
    test_idx.insert(test_idx.end(), pool.begin() + alloc.train,
                    pool.begin() + alloc.train + alloc.test);
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  SplitResult result;
  result.train.schema = data.schema;
  result.test.schema = data.schema;
  result.train.records.reserve(train_idx.size());
  result.test.records.reserve(test_idx.size());
  for (std::size_t i : train_idx) result.train.records.push_back(data.records[i]);
  for (std::size_t i : test_idx) result.test.records.push_back(data.records[i]);
  result.manifest = std::move(manifest);
  return result;
}

void SplitManifest::write(std::ostream& out) const {
  out << "# chids split manifest v1\n";
  out << "seed = " << seed << '\n';
  out << "source_records = " << source_records << '\n';
  out << "train_size = " << train_size << '\n';
  out << "test_size = " << test_size << '\n';
  out << "minority_classes = ";
  for (std::size_t i = 0; i < minority.size(); ++i)
    out << (i ? "," : "") << to_string(minority[i]);
  out << '\n';
  out << "minority_rule = train gets round_half_up(2n/3), test gets the rest\n";
  out << "proportional_rule = largest-remainder apportionment over deduplicated counts, "
         "sampled without replacement\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto& a = per_class[c];
    out << "class." << to_string(class_at(c)) << " = available " << a.available << " train "
        << a.train << " test " << a.test << '\n';
  }
  out << "raw_records = " << raw_records << '\n';
  for (std::size_t c = 0; c < kNumClasses; ++c)
    out << "raw.class." << to_string(class_at(c)) << " = " << raw_per_class[c] << '\n';
}

SplitManifest SplitManifest::read(std::istream& in) {
  auto bad = [](const std::string& why) {
    return Error(ErrorCode::FormatError, "split manifest: " + why);
  };
  auto number = [&](std::string_view text) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) throw bad("bad number '" + std::string(text) + "'");
    return v;
  };
  auto klass = [&](std::string_view name) {
    const auto c = parse_attack_class(name);
    if (!c) throw bad("unknown class '" + std::string(name) + "'");
    return *c;
  };
  SplitManifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw bad("malformed line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "seed") {
      m.seed = number(value);
    } else if (key == "source_records") {
      m.source_records = number(value);
    } else if (key == "train_size") {
      m.train_size = number(value);
    } else if (key == "test_size") {
      m.test_size = number(value);
    } else if (key == "raw_records") {
      m.raw_records = number(value);
    } else if (key == "minority_classes") {
      std::stringstream ss(value);
      std::string name;
      while (std::getline(ss, name, ','))
        if (!name.empty()) m.minority.push_back(klass(name));
    } else if (key.starts_with("raw.class.")) {
      m.raw_per_class[index_of(klass(key.substr(10)))] = number(value);
    } else if (key.starts_with("class.")) {
      auto& a = m.per_class[index_of(klass(key.substr(6)))];
      std::stringstream ss(value);
      std::string w1, w2, w3;
      std::string n1, n2, n3;
      ss >> w1 >> n1 >> w2 >> n2 >> w3 >> n3;
      if (w1 != "available" || w2 != "train" || w3 != "test") throw bad("malformed class line");
      a.available = number(n1);
      a.train = number(n2);
      a.test = number(n3);
    }
  }
  return m;
}

const std::vector<std::string>& default_prune_set() {
  static const std::vector<std::string> names = {"is_host_login", "num_outbound_cmds",
                                                 "urgent",        "su_attempted",
                                                 "land",          "num_failed_logins"};
  return names;
}

Dataset prune_features(const Dataset& data, std::span<const std::string> names) {
  std::vector<bool> drop(data.schema.size(), false);
  for (const auto& n : names) drop[data.schema.index_of(n)] = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < drop.size(); ++i)
    if (!drop[i]) keep.push_back(i);
  return select_columns(data, keep);
}

Dataset project_features(const Dataset& data, std::span<const std::string> keep_names) {
  std::vector<bool> keep(data.schema.size(), false);
  for (const auto& n : keep_names) keep[data.schema.index_of(n)] = true;
  std::vector<std::size_t> columns;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) columns.push_back(i);
  return select_columns(data, columns);
}

NormalizationStats fit_normalizer(const Dataset& train, unsigned threads) {
  if (train.empty()) throw Error(ErrorCode::InvalidConfig, "cannot fit normalizer on no records");
  NormalizationStats stats;
  stats.features.resize(train.schema.size());
  const std::size_t n = train.size();
  parallel_for(train.schema.size(), threads, [&](std::size_t f) {
    auto& fs = stats.features[f];
    fs.name = train.schema[f].name;
    fs.kind = train.schema[f].kind;
    if (fs.kind != FeatureKind::Numeric) return;
    fs.n = n;
    CompensatedSum sum;
    for (const auto& r : train.records) sum.add(r.values[f]);
    const double mean = sum.value() / static_cast<double>(n);
    CompensatedSum sq;
    for (const auto& r : train.records) {
      const double d = r.values[f] - mean;
      sq.add(d * d);
    }
    fs.mean = mean;
    fs.stddev = std::sqrt(sq.value() / static_cast<double>(n));
  });
  return stats;
}

void normalize_values(std::span<double> values, const NormalizationStats& stats) {
  if (values.size() != stats.features.size())
    throw Error(ErrorCode::SchemaMismatch, "record width does not match normalizer");
  for (std::size_t f = 0; f < values.size(); ++f) {
    const auto& fs = stats.features[f];
    if (fs.kind != FeatureKind::Numeric) continue;
    values[f] = fs.stddev > 0.0 ? (values[f] - fs.mean) / fs.stddev : 0.0;
  }
}

Dataset apply_normalizer(const Dataset& data, const NormalizationStats& stats) {
  check_layout(data.schema, stats);
  Dataset out = data;
  for (auto& r : out.records) normalize_values(r.values, stats);
  return out;
}

void NormalizationStats::write(std::ostream& out) const {
  out << "normalizer " << features.size() << '\n';
  for (const auto& f : features) {
    out << "stat " << f.name;
    if (f.kind == FeatureKind::Nominal) {
      out << " nominal\n";
      continue;
    }
    out << " numeric " << format_double(f.mean) << ' ' << format_double(f.stddev) << ' ' << f.n
        << '\n';
  }
}

NormalizationStats NormalizationStats::read(std::istream& in) {
  std::string line;
  std::size_t count = 0;
  {
    if (!std::getline(in, line)) throw Error(ErrorCode::FormatError, "normalizer: truncated");
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key >> count) || key != "normalizer")
      throw Error(ErrorCode::FormatError, "normalizer: expected 'normalizer <n>'");
  }
  NormalizationStats stats;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::FormatError, "normalizer: truncated");
    std::istringstream ss(line);
    std::string key, name, kind;
    if (!(ss >> key >> name >> kind) || key != "stat")
      throw Error(ErrorCode::FormatError, "normalizer: bad line '" + line + "'");
    FeatureStats fs;
    fs.name = name;
    if (kind == "nominal") {
      fs.kind = FeatureKind::Nominal;
    } else if (kind == "numeric") {
      std::string mean, stddev;
      if (!(ss >> mean >> stddev >> fs.n))
        throw Error(ErrorCode::FormatError, "normalizer: bad line '" + line + "'");
      fs.mean = parse_double(mean);
      fs.stddev = parse_double(stddev);
    } else {
      throw Error(ErrorCode::FormatError, "normalizer: unknown kind '" + kind + "'");
    }
    stats.features.push_back(std::move(fs));
  }
  return stats;
}

}  // namespace chids
