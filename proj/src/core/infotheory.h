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

#ifndef PRIVLEAK_CORE_INFOTHEORY_H_
#define PRIVLEAK_CORE_INFOTHEORY_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "core/info_units.h"
#include "core/schema.h"

namespace privleak {

// Inputs whose total deviates from 1 by more than this are rejected;
// smaller deviations are renormalized with a warning.
inline constexpr double kNormalizationTolerance = 1e-6;

// The two mutual-information routes must agree to this tolerance.
inline constexpr double kMiAgreementTolerance = 1e-9;

// Subset enumeration for leakage reports is 2^m - 1 projections.
inline constexpr size_t kMaxReportAttributes = 12;

// Finite joint distribution P(X, S). Rows are observable levels, columns
// are joint protected labels. Entries are renormalized to sum to 1.
//
// A table may additionally be "factored": every column label decomposes
// into one level per protected attribute (see AttachSchema). Subset
// projections and leakage reports require a factored table.
class JointTable {
 public:
  static absl::StatusOr<JointTable> Create(
      std::vector<std::string> x_levels, std::vector<std::string> s_levels,
      std::vector<double> probabilities);

  const std::vector<std::string>& x_levels() const { return x_levels_; }
  const std::vector<std::string>& s_levels() const { return s_levels_; }
  size_t rows() const { return x_levels_.size(); }
  size_t cols() const { return s_levels_.size(); }
  double at(size_t row, size_t col) const { return p_[row * cols() + col]; }
  std::span<const double> probabilities() const { return p_; }

  // Sum of the entries before renormalization.
  double input_total() const { return input_total_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::vector<double> XMarginal() const;
  std::vector<double> SMarginal() const;

  // Swaps the roles of X and S. The result is not factored.
  JointTable Transposed() const;

  bool factored() const { return !factor_names_.empty(); }
  const std::vector<std::string>& factor_names() const { return factor_names_; }
  // factor_codes()[col][a] is the level index of attribute a in column col.
  const std::vector<std::vector<int>>& factor_codes() const {
    return factor_codes_;
  }
  const std::vector<std::vector<std::string>>& factor_levels() const {
    return factor_levels_;
  }

 private:
  friend absl::StatusOr<JointTable> AttachSchema(const JointTable&,
                                                 const ProfileSchema&);
  friend absl::StatusOr<JointTable> ProjectOntoSubset(
      const JointTable&, std::span<const size_t>);

  JointTable() = default;

  std::vector<std::string> x_levels_;
  std::vector<std::string> s_levels_;
  std::vector<double> p_;
  double input_total_ = 1.0;
  std::vector<std::string> warnings_;
  std::vector<std::string> factor_names_;
  std::vector<std::vector<std::string>> factor_levels_;
  std::vector<std::vector<int>> factor_codes_;
};

// Decomposes each column label "l1|l2|...|lm" against the schema's
// protected attributes. Row labels must be observable levels when the
// observable is categorical.
absl::StatusOr<JointTable> AttachSchema(const JointTable& table,
                                        const ProfileSchema& schema);

// Sums columns that agree on the selected attributes. `subset` holds
// indices into factor_names(); the result is factored over that subset.
absl::StatusOr<JointTable> ProjectOntoSubset(const JointTable& table,
                                             std::span<const size_t> subset);

// Header row: corner cell then joint S labels. Each further row: X label
// then probabilities.
absl::StatusOr<JointTable> ParseJointTableCsv(absl::string_view text);
absl::StatusOr<JointTable> LoadJointTable(const std::string& path);
std::string JointTableToCsv(const JointTable& table);

// H(p) = -sum p log p with 0 log 0 = 0. Rejects negative entries and
// totals further than kNormalizationTolerance from 1.
absl::StatusOr<InfoQuantity> Entropy(std::span<const double> dist,
                                     InfoUnit unit);

InfoQuantity EntropyOfS(const JointTable& table, InfoUnit unit);
InfoQuantity EntropyOfX(const JointTable& table, InfoUnit unit);
InfoQuantity JointEntropy(const JointTable& table, InfoUnit unit);

// H(S|X) = sum_x P(x) H(S | X = x); rows with P(x) = 0 contribute 0.
InfoQuantity ConditionalEntropy(const JointTable& table, InfoUnit unit);

struct MutualInfo {
  InfoQuantity value;          // clamped at 0, in the requested unit
  double raw_nats = 0.0;       // H(S) - H(S|X) before clamping
  double direct_nats = 0.0;    // sum p log(p / (p_x p_s))
  bool clamped = false;        // raw value was a tiny negative
};

// Computes I(X;S) both as H(S) - H(S|X) and as the direct log-ratio sum.
// The routes must agree within kMiAgreementTolerance; disagreement is an
// Internal error.
absl::StatusOr<MutualInfo> MutualInformation(const JointTable& table,
                                             InfoUnit unit);

// r = I(X;S) / H(S) in [0, 1]. FailedPrecondition when H(S) = 0.
absl::StatusOr<double> ExposureRatio(const JointTable& table);

// I(X; S_subset) for a factored table.
absl::StatusOr<InfoQuantity> MarginalMi(const JointTable& table,
                                        std::span<const size_t> subset,
                                        InfoUnit unit);

// "sex+disability" <-> {0, 1} for factor names {sex, disability}.
std::string SubsetKey(const std::vector<std::string>& names,
                      std::span<const size_t> subset);
absl::StatusOr<std::vector<size_t>> ParseSubsetKey(
    const std::vector<std::string>& names, absl::string_view key);

struct LeakageEntry {
  std::vector<size_t> attributes;
  std::string key;
  InfoQuantity value;
};

// One entry per non-empty subset of protected attributes, ordered by
// subset size and then lexicographically by attribute index.
using LeakageReport = std::vector<LeakageEntry>;

absl::StatusOr<LeakageReport> IntersectionLeakageReport(
    const JointTable& table, InfoUnit unit);
absl::StatusOr<LeakageReport> IntersectionLeakageReport(
    const JointTable& table, const ProfileSchema& schema, InfoUnit unit);

const LeakageEntry* FindEntry(const LeakageReport& report,
                              absl::string_view key);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_INFOTHEORY_H_
