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

#ifndef PRIVLEAK_CORE_ESTIMATION_H_
#define PRIVLEAK_CORE_ESTIMATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "core/info_units.h"
#include "core/infotheory.h"
#include "core/schema.h"

namespace privleak {

// Log densities below this are floored; exp(-745) is below the smallest
// positive double.
inline constexpr double kLogDensityFloor = -745.0;

enum class EstimationMethod { kAuto, kPlugInCounts, kKdeMonteCarlo };

absl::string_view MethodName(EstimationMethod method);
absl::StatusOr<EstimationMethod> ParseMethod(absl::string_view name);

// Per-attribute Gaussian kernel widths, in the attribute's own units.
class BandwidthSet {
 public:
  absl::Status Set(std::string attribute, double width);
  std::optional<double> Find(absl::string_view attribute) const;
  const std::map<std::string, double, std::less<>>& widths() const {
    return widths_;
  }
  bool empty() const { return widths_.empty(); }

 private:
  std::map<std::string, double, std::less<>> widths_;
};

// "keystroke=0.3;disability=0.05"
absl::StatusOr<BandwidthSet> ParseBandwidthSpec(absl::string_view spec);

// h = 1.06 * sd * n^(-1/5) with the n-1 standard deviation.
absl::StatusOr<double> SilvermanBandwidth(std::span<const double> values);

// Silverman width for every continuous column.
absl::StatusOr<BandwidthSet> SilvermanBandwidths(const SampleSet& samples);

// Plug-in distribution: count / n over the full cross product of declared
// observable levels and joint protected labels. The result is factored.
absl::StatusOr<JointTable> EmpiricalJoint(const SampleSet& samples);

struct KdeOptions {
  // Permit data without continuous columns (pure indicator kernels).
  bool allow_indicator_only = false;
};

// Log densities at evaluation points, each averaged over all n samples.
struct LogDensities {
  std::vector<size_t> points;  // sample indices evaluated
  std::vector<double> joint;   // log p(x_i, s_i)
  std::vector<double> x;       // log p(x_i)
  std::vector<double> s;       // log p(s_i)
  std::vector<size_t> floored_marginals;
};

// Resubstitution densities at every sample point. Continuous dimensions
// contribute a Gaussian factor with their bandwidth; categorical ones an
// exact-match indicator. Marginals drop the factors of excluded columns.
absl::StatusOr<LogDensities> KdeLogDensities(const SampleSet& samples,
                                             const BandwidthSet& bandwidths,
                                             const KdeOptions& options = {});

// Same, restricted to the given sample indices.
absl::StatusOr<LogDensities> KdeLogDensitiesAt(const SampleSet& samples,
                                               const BandwidthSet& bandwidths,
                                               std::span<const size_t> points,
                                               const KdeOptions& options = {});

struct Densities {
  double joint = 0.0;  // p(x, s)
  double x = 0.0;      // p(x)
  double s = 0.0;      // p(s)
};

// Kernel densities at an arbitrary point; `query` holds one value per
// schema column, as in SampleSet::FromRows.
absl::StatusOr<Densities> KdeDensitiesAtPoint(
    const SampleSet& samples, const BandwidthSet& bandwidths,
    const std::vector<SampleSet::Value>& query,
    const KdeOptions& options = {});

struct MiEstimate {
  InfoQuantity value;       // nats, clamped at 0
  double raw_nats = 0.0;    // before clamping
  size_t n = 0;
  size_t eval_points = 0;
  EstimationMethod method = EstimationMethod::kPlugInCounts;
  std::optional<uint64_t> seed;
  BandwidthSet bandwidths;
  std::vector<std::string> warnings;
};

struct McOptions {
  // 0 evaluates every sample; otherwise a seeded subsample of this size.
  size_t max_eval_points = 0;
  bool allow_indicator_only = false;
};

// (1/m) sum_i log( p(x_i, s_i) / (p(x_i) p(s_i)) ) over the evaluation
// points. Seed-independent when every sample is evaluated.
absl::StatusOr<MiEstimate> McMutualInformation(const SampleSet& samples,
                                               const BandwidthSet& bandwidths,
                                               uint64_t seed,
                                               const McOptions& options = {});

struct EstimateOptions {
  EstimationMethod method = EstimationMethod::kAuto;
  uint64_t seed = 0;
  // Widths that replace the Silverman default for named attributes.
  BandwidthSet bandwidth_overrides;
  size_t max_eval_points = 0;
};

// kAuto picks plug-in counts for all-categorical data and KDE otherwise.
absl::StatusOr<MiEstimate> EstimateMutualInformation(
    const SampleSet& samples, const EstimateOptions& options);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_ESTIMATION_H_
