#include "chids/kdd_data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "chids/error.hpp"

namespace chids {

namespace {

struct FeatureSeed {
  const char* name;
  FeatureKind kind;
};

constexpr FeatureKind N = FeatureKind::Numeric;
constexpr FeatureKind S = FeatureKind::Nominal;

// Standard KDD Cup '99 column order.
constexpr FeatureSeed kKddFeatures[] = {
    {"duration", N},
    {"protocol_type", S},
    {"service", S},
    {"flag", S},
    {"src_bytes", N},
    {"dst_bytes", N},
    {"land", S},
    {"wrong_fragment", N},
    {"urgent", N},
    {"hot", N},
    {"num_failed_logins", N},
    {"logged_in", S},
    {"num_compromised", N},
    {"root_shell", N},
    {"su_attempted", N},
    {"num_root", N},
    {"num_file_creations", N},
    {"num_shells", N},
    {"num_access_files", N},
    {"num_outbound_cmds", N},
    {"is_host_login", S},
    {"is_guest_login", S},
    {"count", N},
    {"srv_count", N},
    {"serror_rate", N},
    {"srv_serror_rate", N},
    {"rerror_rate", N},
    {"srv_rerror_rate", N},
    {"same_srv_rate", N},
    {"diff_srv_rate", N},
    {"srv_diff_host_rate", N},
    {"dst_host_count", N},
    {"dst_host_srv_count", N},
    {"dst_host_same_srv_rate", N},
    {"dst_host_diff_srv_rate", N},
    {"dst_host_same_src_port_rate", N},
    {"dst_host_srv_diff_host_rate", N},
    {"dst_host_serror_rate", N},
    {"dst_host_srv_serror_rate", N},
    {"dst_host_rerror_rate", N},
    {"dst_host_srv_rerror_rate", N},
};

struct LabelSeed {
  const char* label;
  AttackClass category;
};

constexpr LabelSeed kKddLabels[] = {
    {"normal", AttackClass::Normal},
    {"smurf", AttackClass::DoS},
    {"back", AttackClass::DoS},
    {"neptune", AttackClass::DoS},
    {"teardrop", AttackClass::DoS},
    {"land", AttackClass::DoS},
    {"pod", AttackClass::DoS},
    {"portsweep", AttackClass::Probe},
    {"satan", AttackClass::Probe},
    {"ipsweep", AttackClass::Probe},
    {"nmap", AttackClass::Probe},
    {"ftp_write", AttackClass::R2L},
    {"guess_passwd", AttackClass::R2L},
    {"warezclient", AttackClass::R2L},
    {"spy", AttackClass::R2L},
    {"warezmaster", AttackClass::R2L},
    {"phf", AttackClass::R2L},
    {"multihop", AttackClass::R2L},
    {"imap", AttackClass::R2L},
    {"buffer_overflow", AttackClass::U2R},
    {"loadmodule", AttackClass::U2R},
    {"perl", AttackClass::U2R},
    {"rootkit", AttackClass::U2R},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  out.reserve(42);
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

// Feeds lines into a dataset, enforcing the error budget.
class Ingest {
 public:
  Ingest(FeatureSchema schema, const ClassTaxonomy& taxonomy, const LoadOptions& options)
      : taxonomy_(taxonomy), options_(options) {
    data_.schema = std::move(schema);
  }

  void feed(std::string_view line) {
    ++line_no_;
    if (trim(line).empty()) return;
    try {
      KddRecord rec = parse_record(line, data_.schema, options_.policy);
      rec.category = taxonomy_.classify(rec.label);
      data_.records.push_back(std::move(rec));
    } catch (const Error& e) {
      issues_.push_back({line_no_, std::string(to_string(e.code())) + ": " + e.what()});
      if (issues_.size() > options_.error_budget) abort_load();
    }
  }

  Dataset finish() {
    if (options_.skipped) *options_.skipped = issues_;
    return std::move(data_);
  }

 private:
  [[noreturn]] void abort_load() const {
    std::ostringstream msg;
    msg << issues_.size() << " malformed line(s) exceed the error budget of "
        << options_.error_budget;
    const std::size_t shown = std::min<std::size_t>(issues_.size(), 5);
    for (std::size_t i = 0; i < shown; ++i)
      msg << "\n  line " << issues_[i].line << ": " << issues_[i].message;
    throw Error(ErrorCode::ParseErrors, msg.str());
  }

  const ClassTaxonomy& taxonomy_;
  const LoadOptions& options_;
  Dataset data_;
  std::vector<ParseIssue> issues_;
  std::size_t line_no_ = 0;
};

}  // namespace

FeatureSchema::FeatureSchema(std::vector<FeatureDef> features) : features_(std::move(features)) {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    features_[i].index = i;
    for (std::size_t j = 0; j < i; ++j)
      if (features_[j].name == features_[i].name)
        throw Error(ErrorCode::InvalidConfig, "duplicate feature name: " + features_[i].name);
  }
  rebuild_lookup();
}

FeatureSchema FeatureSchema::kdd() {
  std::vector<FeatureDef> defs;
  for (const auto& seed : kKddFeatures) defs.push_back({0, seed.name, seed.kind, {}});
  return FeatureSchema(std::move(defs));
}

void FeatureSchema::rebuild_lookup() {
  lookup_.assign(features_.size(), {});
  for (std::size_t f = 0; f < features_.size(); ++f)
    for (std::size_t c = 0; c < features_[f].domain.size(); ++c)
      lookup_[f].emplace(features_[f].domain[c], c);
}

bool FeatureSchema::same_as(const FeatureSchema& other) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& a = features_[i];
    const auto& b = other.features_[i];
    if (a.name != b.name || a.kind != b.kind || a.domain != b.domain) return false;
  }
  return true;
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (const auto& f : features_)
    if (f.name == name) return f.index;
  return std::nullopt;
}

std::size_t FeatureSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::UnknownFeatureName, "unknown feature: " + std::string(name));
}

std::size_t FeatureSchema::count(FeatureKind kind) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      features_.begin(), features_.end(), [kind](const FeatureDef& f) { return f.kind == kind; }));
}

std::optional<std::size_t> FeatureSchema::symbol_code(std::size_t feature,
                                                      std::string_view symbol) const {
  const auto& table = lookup_.at(feature);
  auto it = table.find(std::string(symbol));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureSchema::intern(std::size_t feature, std::string_view symbol) {
  if (auto code = symbol_code(feature, symbol)) return *code;
  auto& def = features_.at(feature);
  def.domain.emplace_back(symbol);
  const std::size_t code = def.domain.size() - 1;
  lookup_[feature].emplace(def.domain.back(), code);
  return code;
}

const std::string& FeatureSchema::symbol(std::size_t feature, std::size_t code) const {
  return features_.at(feature).domain.at(code);
}

std::string normalize_label(std::string_view label) {
  label = trim(label);
  if (!label.empty() && label.back() == '.') label.remove_suffix(1);
  std::string out(label);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

ClassTaxonomy ClassTaxonomy::kdd() {
  ClassTaxonomy t;
  for (const auto& seed : kKddLabels) t.map_.emplace(seed.label, seed.category);
  return t;
}

std::optional<AttackClass> ClassTaxonomy::try_classify(std::string_view label) const {
  auto it = map_.find(normalize_label(label));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

AttackClass ClassTaxonomy::classify(std::string_view label) const {
  if (auto c = try_classify(label)) return *c;
  throw Error(ErrorCode::UnknownLabel, "unknown label: " + std::string(label));
}

std::vector<std::string> ClassTaxonomy::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, _] : map_) out.push_back(label);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ClassTaxonomy::members(AttackClass c) const {
  std::vector<std::string> out;
  for (const auto& [label, category] : map_)
    if (category == c) out.push_back(label);
  std::sort(out.begin(), out.end());
  return out;
}

AttackClass classify_label(std::string_view label, const ClassTaxonomy& taxonomy) {
  return taxonomy.classify(label);
}

ClassCounts Dataset::class_counts() const noexcept {
  ClassCounts counts{};
  for (const auto& r : records) ++counts[index_of(r.category)];
  return counts;
}

KddRecord parse_record(std::string_view line, FeatureSchema& schema, SymbolPolicy policy) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = split_fields(line);
  const std::size_t expected = schema.size() + 1;
  if (fields.size() != expected) {
    throw Error(ErrorCode::FieldCountMismatch,
                "expected " + std::to_string(expected) + " fields, got " +
                    std::to_string(fields.size()));
  }

  KddRecord rec;
  rec.values.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const std::string_view field = fields[i];
    if (schema[i].kind == FeatureKind::Numeric) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::NumericParseError,
                    "feature " + std::to_string(i) + " (" + schema[i].name +
                        "): not a finite number: '" + std::string(field) + "'");
      }
      rec.values[i] = v;
      continue;
    }
    if (auto code = schema.symbol_code(i, field)) {
      rec.values[i] = static_cast<double>(*code);
      continue;
    }
    switch (policy) {
      case SymbolPolicy::Grow:
        rec.values[i] = static_cast<double>(schema.intern(i, field));
        break;
      case SymbolPolicy::MapUnknown:
        rec.values[i] = kUnknownSymbol;
        break;
      case SymbolPolicy::Strict:
        throw Error(ErrorCode::UnknownNominalSymbol,
                    "feature " + std::to_string(i) + " (" + schema[i].name +
                        "): unseen symbol '" + std::string(field) + "'");
    }
  }
  rec.label = normalize_label(fields.back());
  return rec;
}

std::string serialize_record(const KddRecord& record, const FeatureSchema& schema) {
  if (record.values.size() != schema.size())
    throw Error(ErrorCode::SchemaMismatch, "record width does not match schema");
  std::string out;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const double v = record.values[i];
    if (schema[i].kind == FeatureKind::Numeric) {
      append_number(out, v);
    } else if (v < 0) {
      out += '?';
    } else {
      out += schema.symbol(i, static_cast<std::size_t>(v));
    }
    out += ',';
  }
  out += record.label;
  out += '.';
  return out;
}

Dataset read_dataset(std::istream& in, FeatureSchema schema, const ClassTaxonomy& taxonomy,
                     const LoadOptions& options) {
  Ingest ingest(std::move(schema), taxonomy, options);
  std::string line;
  while (std::getline(in, line)) ingest.feed(line);
  return ingest.finish();
}

Dataset load_dataset(const std::filesystem::path& path, FeatureSchema schema,
                     const ClassTaxonomy& taxonomy, const LoadOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(ErrorCode::IoError, "cannot read dataset: " + path.string());

  // gzread passes uncompressed files through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw Error(ErrorCode::IoError, "cannot open dataset: " + path.string());
  gzbuffer(file, 1 << 18);

  Ingest ingest(std::move(schema), taxonomy, options);
  std::string pending;
  std::vector<char> chunk(1 << 18);
  try {
    for (;;) {
      const int n = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()));
      if (n < 0) {
        int errnum = 0;
        const char* msg = gzerror(file, &errnum);
        throw Error(ErrorCode::IoError, "read error in " + path.string() + ": " + msg);
      }
      if (n == 0) break;
      std::string_view data(chunk.data(), static_cast<std::size_t>(n));
      std::size_t start = 0;
      for (;;) {
        const std::size_t nl = data.find('\n', start);
        if (nl == std::string_view::npos) {
          pending.append(data.substr(start));
          break;
        }
        if (pending.empty()) {
          ingest.feed(data.substr(start, nl - start));
        } else {
          pending.append(data.substr(start, nl - start));
          ingest.feed(pending);
          pending.clear();
        }
        start = nl + 1;
      }
    }
    if (!pending.empty()) ingest.feed(pending);
  } catch (...) {
    gzclose(file);
    throw;
  }
  gzclose(file);
  return ingest.finish();
}

}  // namespace chids
