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

#include "core/infotheory.h"

#include <algorithm>
#include <cmath>
#include <map>
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

namespace privleak {
namespace {

// Entries below this are treated as round-off of a zero-mass cell.
constexpr double kNegativeMiSlack = 1e-12;

double EntropyNats(std::span<const double> dist) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log(p);
  }
  // A lone mass a few ulps above 1 would otherwise give -0 or less.
  return std::max(h, 0.0);
}

InfoQuantity FromNats(double nats, InfoUnit unit) {
  return ConvertUnits(Nats(nats), unit);
}

absl::Status CheckDistinct(const std::vector<std::string>& labels,
                           absl::string_view axis) {
  std::set<absl::string_view> seen;
  for (const std::string& label : labels) {
    if (!seen.insert(label).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate ", axis, " label '", label, "'"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<JointTable> JointTable::Create(
    std::vector<std::string> x_levels, std::vector<std::string> s_levels,
    std::vector<double> probabilities) {
  if (x_levels.empty() || s_levels.empty()) {
    return absl::InvalidArgumentError("joint table needs at least one cell");
  }
  if (probabilities.size() != x_levels.size() * s_levels.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "joint table has ", probabilities.size(), " cells, expected ",
        x_levels.size(), " x ", s_levels.size()));
  }
  PRIVLEAK_RETURN_IF_ERROR(CheckDistinct(x_levels, "X"));
  PRIVLEAK_RETURN_IF_ERROR(CheckDistinct(s_levels, "S"));
  double total = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!std::isfinite(p) || p < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "cell (", x_levels[i / s_levels.size()], ", ",
          s_levels[i % s_levels.size()], ") has invalid probability ", p));
    }
    total += p;
  }
  const double deviation = std::abs(total - 1.0);
  if (deviation > kNormalizationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "probabilities sum to %.9g, deviating from 1 by %.3g (tolerance %g)",
        total, deviation, kNormalizationTolerance));
  }
  JointTable table;
  if (deviation > kMiAgreementTolerance) {
    table.warnings_.push_back(absl::StrFormat(
        "probabilities sum to %.12g; renormalized", total));
  }
  for (double& p : probabilities) p /= total;
  table.x_levels_ = std::move(x_levels);
  table.s_levels_ = std::move(s_levels);
  table.p_ = std::move(probabilities);
  table.input_total_ = total;
  return table;
}

std::vector<double> JointTable::XMarginal() const {
  std::vector<double> px(rows(), 0.0);
  for (size_t r = 0; r < rows(); ++r) {
    for (size_t c = 0; c < cols(); ++c) px[r] += at(r, c);
  }
  return px;
}

std::vector<double> JointTable::SMarginal() const {
  std::vector<double> ps(cols(), 0.0);
  for (size_t r = 0; r < rows(); ++r) {
    for (size_t c = 0; c < cols(); ++c) ps[c] += at(r, c);
  }
  return ps;
}

JointTable JointTable::Transposed() const {
  JointTable t;
  t.x_levels_ = s_levels_;
  t.s_levels_ = x_levels_;
  t.p_.resize(p_.size());
  for (size_t r = 0; r < rows(); ++r) {
    for (size_t c = 0; c < cols(); ++c) t.p_[c * rows() + r] = at(r, c);
  }
  t.input_total_ = input_total_;
  t.warnings_ = warnings_;
  return t;
}

absl::StatusOr<JointTable> AttachSchema(const JointTable& table,
                                        const ProfileSchema& schema) {
  const std::vector<AttributeSpec>& attributes = schema.attributes();
  for (const AttributeSpec& spec : attributes) {
    if (!spec.is_categorical()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "attribute '", spec.name(),
          "' is continuous; joint tables need categorical attributes"));
    }
  }
  const AttributeSpec& observable = schema.observable();
  if (observable.is_categorical()) {
    for (const std::string& label : table.x_levels()) {
      if (!observable.LevelIndex(label).has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "row label '", label, "' is not a level of observable '",
            observable.name(), "'"));
      }
    }
  }
  JointTable out = table;
  out.factor_names_.clear();
  out.factor_levels_.clear();
  out.factor_codes_.assign(table.cols(), {});
  for (const AttributeSpec& spec : attributes) {
    out.factor_names_.push_back(spec.name());
    out.factor_levels_.push_back(spec.levels());
  }
  for (size_t c = 0; c < table.cols(); ++c) {
    std::vector<absl::string_view> parts =
        absl::StrSplit(table.s_levels()[c], kJointLabelSeparator);
    if (parts.size() != attributes.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column label '", table.s_levels()[c], "' has ", parts.size(),
          " components, schema has ", attributes.size(),
          " protected attributes"));
    }
    for (size_t a = 0; a < parts.size(); ++a) {
      std::optional<int> code = attributes[a].LevelIndex(parts[a]);
      if (!code.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column label '", table.s_levels()[c], "': '", parts[a],
            "' is not a level of '", attributes[a].name(), "'"));
      }
      out.factor_codes_[c].push_back(*code);
    }
  }
  return out;
}

absl::StatusOr<JointTable> ProjectOntoSubset(const JointTable& table,
                                             std::span<const size_t> subset) {
  if (!table.factored()) {
    return absl::FailedPreconditionError(
        "subset projection needs a table with a schema attached");
  }
  if (subset.empty()) {
    return absl::InvalidArgumentError("attribute subset is empty");
  }
  const size_t m = table.factor_names().size();
  std::vector<size_t> attrs(subset.begin(), subset.end());
  std::sort(attrs.begin(), attrs.end());
  if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end()) {
    return absl::InvalidArgumentError("attribute subset repeats an index");
  }
  if (attrs.back() >= m) {
    return absl::OutOfRangeError(absl::StrCat(
        "attribute index ", attrs.back(), " out of range (", m,
        " protected attributes)"));
  }

  // Group columns by their codes on the subset, in first-seen order.
  std::map<std::vector<int>, size_t> group_of;
  std::vector<std::vector<int>> group_codes;
  std::vector<size_t> column_group(table.cols());
  for (size_t c = 0; c < table.cols(); ++c) {
    std::vector<int> key;
    for (size_t a : attrs) key.push_back(table.factor_codes()[c][a]);
    auto [it, inserted] = group_of.emplace(key, group_codes.size());
    if (inserted) group_codes.push_back(key);
    column_group[c] = it->second;
  }

  JointTable out;
  out.x_levels_ = table.x_levels();
  out.input_total_ = 1.0;
  out.p_.assign(table.rows() * group_codes.size(), 0.0);
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t c = 0; c < table.cols(); ++c) {
      out.p_[r * group_codes.size() + column_group[c]] += table.at(r, c);
    }
  }
  for (const std::vector<int>& codes : group_codes) {
    std::string label;
    for (size_t i = 0; i < attrs.size(); ++i) {
      if (i > 0) label.push_back(kJointLabelSeparator);
      label += table.factor_levels()[attrs[i]][codes[i]];
    }
    out.s_levels_.push_back(std::move(label));
  }
  for (size_t a : attrs) {
    out.factor_names_.push_back(table.factor_names()[a]);
    out.factor_levels_.push_back(table.factor_levels()[a]);
  }
  out.factor_codes_ = std::move(group_codes);
  return out;
}

absl::StatusOr<JointTable> ParseJointTableCsv(absl::string_view text) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::vector<CsvRow> rows, ParseCsv(text));
  if (rows.size() < 2 || rows.front().size() < 2) {
    return absl::DataLossError(
        "joint table needs a header row and at least one data row");
  }
  std::vector<std::string> s_levels;
  for (size_t c = 1; c < rows.front().size(); ++c) {
    s_levels.emplace_back(absl::StripAsciiWhitespace(rows.front()[c]));
  }
  std::vector<std::string> x_levels;
  std::vector<double> probabilities;
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != rows.front().size()) {
      return absl::DataLossError(absl::StrCat(
          "table row ", r, " has ", row.size(), " fields, header has ",
          rows.front().size()));
    }
    x_levels.emplace_back(absl::StripAsciiWhitespace(row[0]));
    for (size_t c = 1; c < row.size(); ++c) {
      double p = 0.0;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(row[c]), &p)) {
        return absl::DataLossError(absl::StrCat(
            "table row ", r, ", column '", s_levels[c - 1], "': '", row[c],
            "' is not a number"));
      }
      probabilities.push_back(p);
    }
  }
  return JointTable::Create(std::move(x_levels), std::move(s_levels),
                            std::move(probabilities));
}

absl::StatusOr<JointTable> LoadJointTable(const std::string& path) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseJointTableCsv(text);
}

std::string JointTableToCsv(const JointTable& table) {
  std::string out = "X";
  for (const std::string& s : table.s_levels()) {
    absl::StrAppend(&out, ",", CsvEscape(s));
  }
  out.push_back('\n');
  for (size_t r = 0; r < table.rows(); ++r) {
    out += CsvEscape(table.x_levels()[r]);
    for (size_t c = 0; c < table.cols(); ++c) {
      absl::StrAppend(&out, ",", absl::StrFormat("%.17g", table.at(r, c)));
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<InfoQuantity> Entropy(std::span<const double> dist,
                                     InfoUnit unit) {
  if (dist.empty()) {
    return absl::InvalidArgumentError("distribution is empty");
  }
  double total = 0.0;
  for (size_t i = 0; i < dist.size(); ++i) {
    if (!std::isfinite(dist[i]) || dist[i] < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "entry ", i, " is negative or not finite: ", dist[i]));
    }
    total += dist[i];
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distribution sums to %.9g, deviating from 1 by %.3g", total,
        std::abs(total - 1.0)));
  }
  return FromNats(EntropyNats(dist), unit);
}

InfoQuantity EntropyOfS(const JointTable& table, InfoUnit unit) {
  return FromNats(EntropyNats(table.SMarginal()), unit);
}

InfoQuantity EntropyOfX(const JointTable& table, InfoUnit unit) {
  return FromNats(EntropyNats(table.XMarginal()), unit);
}

InfoQuantity JointEntropy(const JointTable& table, InfoUnit unit) {
  return FromNats(EntropyNats(table.probabilities()), unit);
}

InfoQuantity ConditionalEntropy(const JointTable& table, InfoUnit unit) {
  const std::vector<double> px = table.XMarginal();
  double h = 0.0;
  std::vector<double> posterior(table.cols());
  for (size_t r = 0; r < table.rows(); ++r) {
    if (px[r] <= 0.0) continue;
    for (size_t c = 0; c < table.cols(); ++c) {
      posterior[c] = table.at(r, c) / px[r];
    }
    h += px[r] * EntropyNats(posterior);
  }
  return FromNats(h, unit);
}

absl::StatusOr<MutualInfo> MutualInformation(const JointTable& table,
                                             InfoUnit unit) {
  const std::vector<double> px = table.XMarginal();
  const std::vector<double> ps = table.SMarginal();
  const double via_entropies = EntropyNats(ps) -
                               ConditionalEntropy(table, InfoUnit::kNats).value;
  double direct = 0.0;
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t c = 0; c < table.cols(); ++c) {
      const double p = table.at(r, c);
      if (p <= 0.0) continue;
      const double independent = px[r] * ps[c];
      if (independent <= 0.0) {
        return absl::InternalError(absl::StrCat(
            "cell (", table.x_levels()[r], ", ", table.s_levels()[c],
            ") has mass but a zero marginal"));
      }
      direct += p * std::log(p / independent);
    }
  }
  if (std::abs(via_entropies - direct) > kMiAgreementTolerance) {
    return absl::InternalError(absl::StrFormat(
        "mutual information routes disagree: %.17g vs %.17g", via_entropies,
        direct));
  }
  if (via_entropies < -kNegativeMiSlack) {
    return absl::InternalError(absl::StrFormat(
        "mutual information is negative: %.17g", via_entropies));
  }
  MutualInfo mi;
  mi.raw_nats = via_entropies;
  mi.direct_nats = direct;
  mi.clamped = via_entropies < 0.0;
  mi.value = FromNats(std::max(0.0, via_entropies), unit);
  return mi;
}

absl::StatusOr<double> ExposureRatio(const JointTable& table) {
  const double hs = EntropyOfS(table, InfoUnit::kNats).value;
  if (!(hs > 0.0)) {
    return absl::FailedPreconditionError(
        "H(S) = 0: the protected profile is already fully known");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(MutualInfo mi,
                            MutualInformation(table, InfoUnit::kNats));
  return std::clamp(mi.value.value / hs, 0.0, 1.0);
}

absl::StatusOr<InfoQuantity> MarginalMi(const JointTable& table,
                                        std::span<const size_t> subset,
                                        InfoUnit unit) {
  PRIVLEAK_ASSIGN_OR_RETURN(JointTable projected,
                            ProjectOntoSubset(table, subset));
  PRIVLEAK_ASSIGN_OR_RETURN(MutualInfo mi, MutualInformation(projected, unit));
  return mi.value;
}

std::string SubsetKey(const std::vector<std::string>& names,
                      std::span<const size_t> subset) {
  std::string key;
  for (size_t i = 0; i < subset.size(); ++i) {
    if (i > 0) key.push_back(kSubsetKeySeparator);
    key += names[subset[i]];
  }
  return key;
}

absl::StatusOr<std::vector<size_t>> ParseSubsetKey(
    const std::vector<std::string>& names, absl::string_view key) {
  std::vector<size_t> subset;
  for (absl::string_view part : absl::StrSplit(key, kSubsetKeySeparator)) {
    part = absl::StripAsciiWhitespace(part);
    auto it = std::find(names.begin(), names.end(), part);
    if (it == names.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "subset '", key, "' names unknown attribute '", part, "'"));
    }
    subset.push_back(static_cast<size_t>(it - names.begin()));
  }
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("subset '", key, "' repeats an attribute"));
  }
  return subset;
}

absl::StatusOr<LeakageReport> IntersectionLeakageReport(
    const JointTable& table, InfoUnit unit) {
  if (!table.factored()) {
    return absl::FailedPreconditionError(
        "leakage report needs a table with a schema attached");
  }
  const size_t m = table.factor_names().size();
  if (m > kMaxReportAttributes) {
    return absl::InvalidArgumentError(absl::StrCat(
        "leakage report supports at most ", kMaxReportAttributes,
        " protected attributes, schema has ", m));
  }
  std::vector<std::vector<size_t>> subsets;
  for (uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<size_t> subset;
    for (size_t a = 0; a < m; ++a) {
      if (mask & (1u << a)) subset.push_back(a);
    }
    subsets.push_back(std::move(subset));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const std::vector<size_t>& a, const std::vector<size_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  LeakageReport report;
  for (std::vector<size_t>& subset : subsets) {
    PRIVLEAK_ASSIGN_OR_RETURN(InfoQuantity value,
                              MarginalMi(table, subset, unit));
    std::string key = SubsetKey(table.factor_names(), subset);
    report.push_back({std::move(subset), std::move(key), value});
  }
  return report;
}

absl::StatusOr<LeakageReport> IntersectionLeakageReport(
    const JointTable& table, const ProfileSchema& schema, InfoUnit unit) {
  if (schema.protected_count() > kMaxReportAttributes) {
    return absl::InvalidArgumentError(absl::StrCat(
        "leakage report supports at most ", kMaxReportAttributes,
        " protected attributes, schema has ", schema.protected_count()));
  }
  PRIVLEAK_ASSIGN_OR_RETURN(JointTable factored, AttachSchema(table, schema));
  return IntersectionLeakageReport(factored, unit);
}

const LeakageEntry* FindEntry(const LeakageReport& report,
                              absl::string_view key) {
  for (const LeakageEntry& entry : report) {
    if (entry.key == key) return &entry;
  }
  return nullptr;
}

}  // namespace privleak
