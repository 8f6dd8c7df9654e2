// Copyright 2026 The Privleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/schema.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "core/csv.h"
#include "core/status_macros.h"
#include "json.hpp"

namespace privleak {
namespace {

using ::nlohmann::json;

absl::Status ValidateName(absl::string_view name) {
  if (name.empty()) {
    return absl::InvalidArgumentError("attribute name must be non-empty");
  }
  if (name.find_first_of("+|,\"\n\r") != absl::string_view::npos) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute name '", name, "' contains a reserved character"));
  }
  return absl::OkStatus();
}

absl::StatusOr<AttributeSpec> AttributeFromJson(const json& node) {
  if (!node.is_object()) {
    return absl::InvalidArgumentError("attribute entry must be an object");
  }
  if (!node.contains("name") || !node["name"].is_string()) {
    return absl::InvalidArgumentError("attribute entry needs a string 'name'");
  }
  std::string name = node["name"].get<std::string>();
  std::string kind = node.value("kind", "");
  if (kind == "categorical") {
    if (!node.contains("levels") || !node["levels"].is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", name, "' needs a 'levels' array"));
    }
    std::vector<std::string> levels;
    for (const json& level : node["levels"]) {
      if (!level.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("attribute '", name, "' has a non-string level"));
      }
      levels.push_back(level.get<std::string>());
    }
    return AttributeSpec::Categorical(std::move(name), std::move(levels));
  }
  if (kind == "continuous") {
    const json* range = node.contains("range") ? &node["range"] : nullptr;
    if (range == nullptr || !range->is_array() || range->size() != 2 ||
        !(*range)[0].is_number() || !(*range)[1].is_number()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", name, "' needs a numeric 'range' [lower, upper]"));
    }
    return AttributeSpec::Continuous(std::move(name),
                                     (*range)[0].get<double>(),
                                     (*range)[1].get<double>());
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "attribute '", name, "' has unknown kind '", kind,
      "' (expected categorical or continuous)"));
}

json AttributeToJson(const AttributeSpec& spec) {
  json node = json::object();
  node["name"] = spec.name();
  if (spec.is_categorical()) {
    node["kind"] = "categorical";
    node["levels"] = spec.levels();
  } else {
    node["kind"] = "continuous";
    node["range"] = {spec.lower(), spec.upper()};
  }
  return node;
}

absl::StatusOr<double> ParseReal(absl::string_view text) {
  double value = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(text), &value)) {
    return absl::DataLossError(absl::StrCat("'", text, "' is not a number"));
  }
  if (!std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", text, "' is not a finite number"));
  }
  return value;
}

}  // namespace

absl::StatusOr<AttributeSpec> AttributeSpec::Categorical(
    std::string name, std::vector<std::string> levels) {
  PRIVLEAK_RETURN_IF_ERROR(ValidateName(name));
  if (levels.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", name, "' has no levels"));
  }
  std::set<absl::string_view> seen;
  for (const std::string& level : levels) {
    if (level.empty() ||
        level.find(kJointLabelSeparator) != std::string::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", name, "' has an empty level or one containing '",
          std::string(1, kJointLabelSeparator), "'"));
    }
    if (!seen.insert(level).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", name, "' repeats level '", level, "'"));
    }
  }
  AttributeSpec spec;
  spec.name_ = std::move(name);
  spec.categorical_ = true;
  spec.levels_ = std::move(levels);
  return spec;
}

absl::StatusOr<AttributeSpec> AttributeSpec::Continuous(std::string name,
                                                        double lower,
                                                        double upper) {
  PRIVLEAK_RETURN_IF_ERROR(ValidateName(name));
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute '", name, "' needs finite bounds with lower < upper, got [",
        lower, ", ", upper, "]"));
  }
  AttributeSpec spec;
  spec.name_ = std::move(name);
  spec.categorical_ = false;
  spec.lower_ = lower;
  spec.upper_ = upper;
  return spec;
}

std::optional<int> AttributeSpec::LevelIndex(absl::string_view label) const {
  for (size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool AttributeSpec::Contains(double value) const {
  return value >= lower_ && value <= upper_;
}

absl::StatusOr<ProfileSchema> ProfileSchema::Create(
    std::vector<AttributeSpec> attributes, AttributeSpec observable) {
  if (attributes.empty()) {
    return absl::InvalidArgumentError(
        "schema needs at least one protected attribute");
  }
  std::set<absl::string_view> names;
  for (const AttributeSpec& spec : attributes) {
    if (!names.insert(spec.name()).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate attribute name '", spec.name(), "'"));
    }
  }
  if (names.contains(observable.name())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "observable name '", observable.name(),
        "' collides with a protected attribute"));
  }
  ProfileSchema schema;
  schema.columns_ = attributes;
  schema.columns_.push_back(std::move(observable));
  schema.attributes_ = std::move(attributes);
  return schema;
}

std::optional<size_t> ProfileSchema::FindColumn(absl::string_view name) const {
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].name() == name) return c;
  }
  return std::nullopt;
}

bool ProfileSchema::all_categorical() const {
  return std::all_of(columns_.begin(), columns_.end(),
                     [](const AttributeSpec& a) { return a.is_categorical(); });
}

absl::StatusOr<ProfileSchema> ParseSchemaJson(absl::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::DataLossError("schema document is not valid JSON");
  }
  if (!doc.is_object() || !doc.contains("attributes") ||
      !doc["attributes"].is_array()) {
    return absl::InvalidArgumentError("schema needs an 'attributes' array");
  }
  if (!doc.contains("observable")) {
    return absl::InvalidArgumentError("schema needs an 'observable' entry");
  }
  std::vector<AttributeSpec> attributes;
  for (const json& node : doc["attributes"]) {
    PRIVLEAK_ASSIGN_OR_RETURN(AttributeSpec spec, AttributeFromJson(node));
    attributes.push_back(std::move(spec));
  }
  PRIVLEAK_ASSIGN_OR_RETURN(AttributeSpec observable,
                            AttributeFromJson(doc["observable"]));
  return ProfileSchema::Create(std::move(attributes), std::move(observable));
}

absl::StatusOr<ProfileSchema> LoadSchema(const std::string& path) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseSchemaJson(text);
}

std::string SchemaToJson(const ProfileSchema& schema) {
  json doc = json::object();
  doc["attributes"] = json::array();
  for (const AttributeSpec& spec : schema.attributes()) {
    doc["attributes"].push_back(AttributeToJson(spec));
  }
  doc["observable"] = AttributeToJson(schema.observable());
  return doc.dump(2) + "\n";
}

absl::StatusOr<std::vector<std::string>> BuildIntersectionLabels(
    const ProfileSchema& schema) {
  size_t total = 1;
  for (const AttributeSpec& spec : schema.attributes()) {
    if (!spec.is_categorical()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "attribute '", spec.name(),
          "' is continuous; discretize before building joint labels"));
    }
    total *= spec.levels().size();
  }
  std::vector<std::string> labels;
  labels.reserve(total);
  std::vector<size_t> odometer(schema.protected_count(), 0);
  for (size_t n = 0; n < total; ++n) {
    std::string label;
    for (size_t a = 0; a < odometer.size(); ++a) {
      if (a > 0) label.push_back(kJointLabelSeparator);
      label += schema.attributes()[a].levels()[odometer[a]];
    }
    labels.push_back(std::move(label));
    for (size_t a = odometer.size(); a-- > 0;) {
      if (++odometer[a] < schema.attributes()[a].levels().size()) break;
      odometer[a] = 0;
    }
  }
  return labels;
}

absl::StatusOr<SampleSet> SampleSet::FromColumns(
    ProfileSchema schema, std::vector<std::vector<int>> codes,
    std::vector<std::vector<double>> reals) {
  const size_t columns = schema.column_count();
  if (codes.size() != columns || reals.size() != columns) {
    return absl::InvalidArgumentError("column count does not match schema");
  }
  std::optional<size_t> n;
  for (size_t c = 0; c < columns; ++c) {
    const AttributeSpec& spec = schema.column(c);
    const size_t len =
        spec.is_categorical() ? codes[c].size() : reals[c].size();
    if ((spec.is_categorical() && !reals[c].empty()) ||
        (!spec.is_categorical() && !codes[c].empty())) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", spec.name(), "' holds values of the wrong kind"));
    }
    if (n.has_value() && *n != len) {
      return absl::InvalidArgumentError("columns have different lengths");
    }
    n = len;
    for (size_t r = 0; r < len; ++r) {
      if (spec.is_categorical()) {
        const int code = codes[c][r];
        if (code < 0 || static_cast<size_t>(code) >= spec.levels().size()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r + 1, ", column '", spec.name(),
              "': level index out of range"));
        }
      } else if (!std::isfinite(reals[c][r]) || !spec.Contains(reals[c][r])) {
        return absl::InvalidArgumentError(absl::StrCat(
            "row ", r + 1, ", column '", spec.name(), "': value ",
            reals[c][r], " outside [", spec.lower(), ", ", spec.upper(), "]"));
      }
    }
  }
  if (!n.has_value() || *n == 0) {
    return absl::InvalidArgumentError("sample set has no rows");
  }
  SampleSet samples(std::move(schema));
  samples.codes_ = std::move(codes);
  samples.reals_ = std::move(reals);
  samples.n_ = *n;
  return samples;
}

absl::StatusOr<SampleSet> SampleSet::FromRows(
    ProfileSchema schema, const std::vector<std::vector<Value>>& rows) {
  const size_t columns = schema.column_count();
  std::vector<std::vector<int>> codes(columns);
  std::vector<std::vector<double>> reals(columns);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, " has ", rows[r].size(),
                       " values, schema has ", columns, " columns"));
    }
    for (size_t c = 0; c < columns; ++c) {
      const AttributeSpec& spec = schema.column(c);
      const Value& value = rows[r][c];
      if (spec.is_categorical()) {
        const std::string* label = std::get_if<std::string>(&value);
        std::optional<int> code =
            label != nullptr ? spec.LevelIndex(*label) : std::nullopt;
        if (!code.has_value()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r + 1, ", column '", spec.name(), "': value '",
              label != nullptr ? *label : "<number>",
              "' is not a declared level"));
        }
        codes[c].push_back(*code);
      } else {
        const double* real = std::get_if<double>(&value);
        if (real == nullptr) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r + 1, ", column '", spec.name(),
              "': expected a number"));
        }
        reals[c].push_back(*real);
      }
    }
  }
  return FromColumns(std::move(schema), std::move(codes), std::move(reals));
}

absl::StatusOr<SampleSet> ParseSamplesCsv(absl::string_view text,
                                          const ProfileSchema& schema) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::vector<CsvRow> rows, ParseCsv(text));
  if (rows.empty()) {
    return absl::InvalidArgumentError("sample file is empty");
  }
  const CsvRow& header = rows.front();
  const size_t columns = schema.column_count();
  // file column -> schema column
  std::vector<size_t> binding(header.size());
  std::vector<bool> bound(columns, false);
  for (size_t f = 0; f < header.size(); ++f) {
    absl::string_view name = absl::StripAsciiWhitespace(header[f]);
    std::optional<size_t> column = schema.FindColumn(name);
    if (!column.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown column '", name, "' in sample header"));
    }
    if (bound[*column]) {
      return absl::InvalidArgumentError(
          absl::StrCat("column '", name, "' appears twice in sample header"));
    }
    bound[*column] = true;
    binding[f] = *column;
  }
  for (size_t c = 0; c < columns; ++c) {
    if (!bound[c]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sample header lacks column '", schema.column(c).name(), "'"));
    }
  }
  if (rows.size() == 1) {
    return absl::InvalidArgumentError("sample file has a header but no rows");
  }

  std::vector<std::vector<int>> codes(columns);
  std::vector<std::vector<double>> reals(columns);
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", r, ": expected ", header.size(), " fields, found ",
          row.size()));
    }
    for (size_t f = 0; f < row.size(); ++f) {
      const AttributeSpec& spec = schema.column(binding[f]);
      absl::string_view cell = absl::StripAsciiWhitespace(row[f]);
      if (cell.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "row ", r, ", column '", spec.name(), "': missing value"));
      }
      if (spec.is_categorical()) {
        std::optional<int> code = spec.LevelIndex(cell);
        if (!code.has_value()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r, ", column '", spec.name(), "': value '", cell,
              "' is not one of the declared levels {",
              absl::StrJoin(spec.levels(), ","), "}"));
        }
        codes[binding[f]].push_back(*code);
      } else {
        absl::StatusOr<double> value = ParseReal(cell);
        if (!value.ok()) {
          return absl::Status(
              value.status().code(),
              absl::StrCat("row ", r, ", column '", spec.name(), "': ",
                           value.status().message()));
        }
        if (!spec.Contains(*value)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r, ", column '", spec.name(), "': value ", cell,
              " outside [", spec.lower(), ", ", spec.upper(), "]"));
        }
        reals[binding[f]].push_back(*value);
      }
    }
  }
  return SampleSet::FromColumns(schema, std::move(codes), std::move(reals));
}

absl::StatusOr<SampleSet> LoadSamples(const std::string& path,
                                      const ProfileSchema& schema) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseSamplesCsv(text, schema);
}

std::string SamplesToCsv(const SampleSet& samples) {
  const ProfileSchema& schema = samples.schema();
  std::string out;
  for (size_t c = 0; c < schema.column_count(); ++c) {
    if (c > 0) out.push_back(',');
    out += CsvEscape(schema.column(c).name());
  }
  out.push_back('\n');
  for (size_t r = 0; r < samples.size(); ++r) {
    for (size_t c = 0; c < schema.column_count(); ++c) {
      if (c > 0) out.push_back(',');
      const AttributeSpec& spec = schema.column(c);
      if (spec.is_categorical()) {
        out += CsvEscape(spec.levels()[samples.codes(c)[r]]);
      } else {
        out += absl::StrFormat("%.17g", samples.reals(c)[r]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<BinningRule> BinningRule::EqualWidth(int bins) {
  if (bins < 2) {
    return absl::InvalidArgumentError("equal-width binning needs k >= 2");
  }
  return BinningRule{Kind::kEqualWidth, bins, {}};
}

absl::StatusOr<BinningRule> BinningRule::Quantile(int bins) {
  if (bins < 2) {
    return absl::InvalidArgumentError("quantile binning needs k >= 2");
  }
  return BinningRule{Kind::kQuantile, bins, {}};
}

absl::StatusOr<BinningRule> BinningRule::Explicit(std::vector<double> cuts) {
  if (cuts.empty()) {
    return absl::InvalidArgumentError(
        "explicit binning needs at least one cut point (k >= 2)");
  }
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (!std::isfinite(cuts[i]) || (i > 0 && !(cuts[i - 1] < cuts[i]))) {
      return absl::InvalidArgumentError(
          "explicit cut points must be finite and strictly increasing");
    }
  }
  const int bins = static_cast<int>(cuts.size()) + 1;
  return BinningRule{Kind::kExplicit, bins, std::move(cuts)};
}

absl::Status BinningPolicy::Set(std::string attribute, BinningRule rule) {
  if (rules_.contains(attribute)) {
    return absl::InvalidArgumentError(
        absl::StrCat("binning rule for '", attribute, "' given twice"));
  }
  rules_.emplace(std::move(attribute), std::move(rule));
  return absl::OkStatus();
}

const BinningRule* BinningPolicy::Find(absl::string_view attribute) const {
  auto it = rules_.find(attribute);
  return it == rules_.end() ? nullptr : &it->second;
}

absl::StatusOr<BinningPolicy> ParseBinningSpec(absl::string_view spec) {
  BinningPolicy policy;
  for (absl::string_view entry :
       absl::StrSplit(spec, ';', absl::SkipWhitespace())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(entry, absl::MaxSplits('=', 1));
    absl::string_view name = absl::StripAsciiWhitespace(kv.first);
    std::pair<absl::string_view, absl::string_view> rule_text =
        absl::StrSplit(absl::StripAsciiWhitespace(kv.second),
                       absl::MaxSplits(':', 1));
    if (name.empty() || rule_text.second.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "binning entry '", entry, "' must look like name=rule:argument"));
    }
    absl::StatusOr<BinningRule> rule =
        absl::InvalidArgumentError(absl::StrCat(
            "unknown binning rule '", rule_text.first,
            "' (expected equal, quantile or cuts)"));
    if (rule_text.first == "equal" || rule_text.first == "quantile") {
      int k = 0;
      if (!absl::SimpleAtoi(rule_text.second, &k)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "binning entry '", entry, "': bin count must be an integer"));
      }
      rule = rule_text.first == "equal" ? BinningRule::EqualWidth(k)
                                        : BinningRule::Quantile(k);
    } else if (rule_text.first == "cuts") {
      std::vector<double> cuts;
      for (absl::string_view cut : absl::StrSplit(rule_text.second, ',')) {
        absl::StatusOr<double> value = ParseReal(cut);
        if (!value.ok()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "binning for '", name, "': ", value.status().message()));
        }
        cuts.push_back(*value);
      }
      rule = BinningRule::Explicit(std::move(cuts));
    }
    if (!rule.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", name, "': ", rule.status().message()));
    }
    PRIVLEAK_RETURN_IF_ERROR(policy.Set(std::string(name), *std::move(rule)));
  }
  return policy;
}

absl::StatusOr<std::vector<double>> ResolveCutPoints(
    const AttributeSpec& attribute, const BinningRule& rule,
    std::span<const double> values) {
  if (attribute.is_categorical()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute '", attribute.name(), "' is already categorical"));
  }
  const double lo = attribute.lower();
  const double hi = attribute.upper();
  std::vector<double> cuts;
  switch (rule.kind) {
    case BinningRule::Kind::kEqualWidth:
      for (int j = 1; j < rule.bins; ++j) {
        cuts.push_back(lo + (hi - lo) * j / rule.bins);
      }
      break;
    case BinningRule::Kind::kExplicit:
      for (double cut : rule.cuts) {
        if (!(cut > lo && cut < hi)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "attribute '", attribute.name(), "': cut point ", cut,
              " is not strictly inside [", lo, ", ", hi, "]"));
        }
      }
      cuts = rule.cuts;
      break;
    case BinningRule::Kind::kQuantile: {
      std::vector<double> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end());
      std::vector<double> unique_values = sorted;
      unique_values.erase(
          std::unique(unique_values.begin(), unique_values.end()),
          unique_values.end());
      if (static_cast<size_t>(rule.bins) > unique_values.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "attribute '", attribute.name(), "': quantile binning with k=",
            rule.bins, " exceeds its ", unique_values.size(),
            " distinct values"));
      }
      const size_t n = sorted.size();
      for (int j = 1; j < rule.bins; ++j) {
        const size_t lower_count =
            std::max<size_t>(1, static_cast<size_t>(j) * n / rule.bins);
        const double last_lower = sorted[lower_count - 1];
        auto next = std::upper_bound(sorted.begin(), sorted.end(), last_lower);
        if (next == sorted.end()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "attribute '", attribute.name(),
              "': ties leave quantile bin ", j, " empty"));
        }
        double cut = last_lower + (*next - last_lower) / 2;
        if (!(cut > last_lower)) cut = *next;
        if (!cuts.empty() && !(cut > cuts.back())) {
          return absl::InvalidArgumentError(absl::StrCat(
              "attribute '", attribute.name(),
              "': ties collapse quantile bins; use fewer bins"));
        }
        cuts.push_back(cut);
      }
      break;
    }
  }
  return cuts;
}

int BinIndex(std::span<const double> cuts, double x) {
  return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x) -
                          cuts.begin());
}

absl::StatusOr<Discretization> Discretize(const SampleSet& samples,
                                          const BinningPolicy& policy) {
  const ProfileSchema& schema = samples.schema();
  for (const auto& [name, rule] : policy.rules()) {
    std::optional<size_t> column = schema.FindColumn(name);
    if (!column.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("binning rule names unknown attribute '", name, "'"));
    }
    if (schema.column(*column).is_categorical()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "binning rule given for categorical attribute '", name, "'"));
    }
  }

  std::map<std::string, std::vector<double>> all_cuts;
  std::vector<AttributeSpec> specs;
  std::vector<std::vector<int>> codes(schema.column_count());
  std::vector<std::vector<double>> reals(schema.column_count());
  for (size_t c = 0; c < schema.column_count(); ++c) {
    const AttributeSpec& spec = schema.column(c);
    if (spec.is_categorical()) {
      specs.push_back(spec);
      codes[c] = samples.codes(c);
      continue;
    }
    const BinningRule* rule = policy.Find(spec.name());
    if (rule == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "no binning rule for continuous attribute '", spec.name(), "'"));
    }
    PRIVLEAK_ASSIGN_OR_RETURN(
        std::vector<double> cuts,
        ResolveCutPoints(spec, *rule, samples.reals(c)));
    std::vector<std::string> levels;
    for (size_t b = 0; b <= cuts.size(); ++b) {
      levels.push_back(absl::StrCat("bin", b));
    }
    PRIVLEAK_ASSIGN_OR_RETURN(
        AttributeSpec binned,
        AttributeSpec::Categorical(spec.name(), std::move(levels)));
    specs.push_back(std::move(binned));
    codes[c].reserve(samples.size());
    for (double x : samples.reals(c)) codes[c].push_back(BinIndex(cuts, x));
    all_cuts.emplace(spec.name(), std::move(cuts));
  }

  AttributeSpec observable = specs.back();
  specs.pop_back();
  PRIVLEAK_ASSIGN_OR_RETURN(
      ProfileSchema binned_schema,
      ProfileSchema::Create(std::move(specs), std::move(observable)));
  PRIVLEAK_ASSIGN_OR_RETURN(
      SampleSet binned,
      SampleSet::FromColumns(std::move(binned_schema), std::move(codes),
                             std::move(reals)));
  return Discretization{std::move(binned), std::move(all_cuts)};
}

}  // namespace privleak
