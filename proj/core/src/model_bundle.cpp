#include "chids/model_bundle.hpp"

#include <fstream>
#include <string>

#include "chids/error.hpp"

namespace chids {

namespace {
constexpr const char* kMagic = "# chids model v1";
}

std::vector<double> ModelBundle::prepare(const KddRecord& raw,
                                         const FeatureSchema& raw_schema) const {
  const auto& schema = rules.schema();
  std::vector<double> values(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const auto src = raw_schema.find(schema[f].name);
    if (!src || raw_schema[*src].kind != schema[f].kind)
      throw Error(ErrorCode::SchemaMismatch, "record lacks model feature " + schema[f].name);
    const double v = raw.values.at(*src);
    if (schema[f].kind == FeatureKind::Numeric) {
      values[f] = v;
      continue;
    }
    values[f] = kUnknownSymbol;
    if (v >= 0) {
      const auto& symbol = raw_schema.symbol(*src, static_cast<std::size_t>(v));
      if (auto code = schema.symbol_code(f, symbol)) values[f] = static_cast<double>(*code);
    }
  }
  normalize_values(values, normalizer);
  return values;
}

void ModelBundle::write(std::ostream& out) const {
  out << kMagic << '\n';
  normalizer.write(out);
  rules.write(out);
}

ModelBundle ModelBundle::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw Error(ErrorCode::FormatError, "model: missing or unsupported header");
  auto stats = NormalizationStats::read(in);
  auto rules = RuleSet::read(in);
  if (stats.features.size() != rules.schema().size())
    throw Error(ErrorCode::FormatError, "model: normalizer and rule list disagree on width");
  for (std::size_t f = 0; f < stats.features.size(); ++f)
    if (stats.features[f].name != rules.schema()[f].name)
      throw Error(ErrorCode::FormatError, "model: normalizer and rule list disagree on features");
  return ModelBundle{std::move(stats), std::move(rules)};
}

void ModelBundle::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write(out);
}

ModelBundle ModelBundle::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "cannot read model " + path.string());
  return read(in);
}

}  // namespace chids
