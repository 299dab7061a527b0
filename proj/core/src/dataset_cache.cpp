#include "chids/dataset_cache.hpp"

#include <fstream>
#include <sstream>

#include "chids/error.hpp"

namespace chids {

namespace {

constexpr const char* kMagic = "# chids-dataset-cache v1";

[[noreturn]] void bad_cache(const std::string& what) {
  throw Error(ErrorCode::FormatError, "cache/model format: " + what);
}

}  // namespace

void write_schema_block(std::ostream& out, const FeatureSchema& schema) {
  out << "features " << schema.size() << '\n';
  for (const auto& f : schema.features()) {
    out << "feature " << f.name;
    if (f.kind == FeatureKind::Numeric) {
      out << " numeric\n";
      continue;
    }
    out << " nominal " << f.domain.size();
    for (const auto& s : f.domain) out << ' ' << s;
    out << '\n';
  }
}

FeatureSchema read_schema_block(std::istream& in) {
  std::string line;
  std::size_t n_features = 0;
  {
    if (!std::getline(in, line)) bad_cache("truncated");
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key >> n_features) || key != "features") bad_cache("expected 'features <n>'");
  }
  std::vector<FeatureDef> defs;
  for (std::size_t i = 0; i < n_features; ++i) {
    if (!std::getline(in, line)) bad_cache("truncated feature block");
    std::istringstream ss(line);
    std::string key, name, kind;
    if (!(ss >> key >> name >> kind) || key != "feature") bad_cache("bad feature line: " + line);
    FeatureDef def{i, name, FeatureKind::Numeric, {}};
    if (kind == "nominal") {
      def.kind = FeatureKind::Nominal;
      std::size_t k = 0;
      if (!(ss >> k)) bad_cache("bad nominal domain: " + line);
      def.domain.resize(k);
      for (auto& s : def.domain)
        if (!(ss >> s)) bad_cache("short nominal domain: " + line);
    } else if (kind != "numeric") {
      bad_cache("unknown feature kind: " + kind);
    }
    defs.push_back(std::move(def));
  }
  return FeatureSchema(std::move(defs));
}

void write_dataset_cache(std::ostream& out, const Dataset& data) {
  out << kMagic << '\n';
  write_schema_block(out, data.schema);
  out << "records " << data.size() << '\n';
  for (const auto& r : data.records) {
    std::string line = serialize_record(r, data.schema);
    line.pop_back();  // trailing period is a raw-dataset convention only
    out << line << '\n';
  }
}

void write_dataset_cache(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_dataset_cache(out, data);
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

Dataset read_dataset_cache(std::istream& in, const ClassTaxonomy& taxonomy) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) bad_cache("missing or unsupported header");

  FeatureSchema schema = read_schema_block(in);

  std::size_t n_records = 0;
  {
    if (!std::getline(in, line)) bad_cache("truncated");
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key >> n_records) || key != "records") bad_cache("expected 'records <m>'");
  }

  Dataset data;
  data.schema = std::move(schema);
  data.records.reserve(n_records);
  for (std::size_t i = 0; i < n_records; ++i) {
    if (!std::getline(in, line)) bad_cache("expected " + std::to_string(n_records) + " records");
    KddRecord rec = parse_record(line, data.schema, SymbolPolicy::Strict);
    rec.category = taxonomy.classify(rec.label);
    data.records.push_back(std::move(rec));
  }
  return data;
}

Dataset read_dataset_cache(const std::filesystem::path& path, const ClassTaxonomy& taxonomy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "cannot read cache " + path.string());
  return read_dataset_cache(in, taxonomy);
}

}  // namespace chids
