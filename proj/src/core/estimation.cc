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

#include "core/estimation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <utility>
#include <variant>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "core/status_macros.h"

namespace privleak {
namespace {

struct KernelColumn {
  size_t column = 0;
  bool categorical = true;
  double inv_h = 0.0;
  double norm = 0.0;  // 1 / (h sqrt(2 pi))
  bool in_x = false;
};

double KernelFactor(const KernelColumn& k, const SampleSet& samples, size_t i,
                    size_t j) {
  if (k.categorical) {
    const std::vector<int>& codes = samples.codes(k.column);
    return codes[i] == codes[j] ? 1.0 : 0.0;
  }
  const std::vector<double>& v = samples.reals(k.column);
  const double u = (v[i] - v[j]) * k.inv_h;
  return k.norm * std::exp(-0.5 * u * u);
}

absl::StatusOr<std::vector<KernelColumn>> BuildKernels(
    const SampleSet& samples, const BandwidthSet& bandwidths,
    const KdeOptions& options) {
  const ProfileSchema& schema = samples.schema();
  for (const auto& [name, h] : bandwidths.widths()) {
    std::optional<size_t> column = schema.FindColumn(name);
    if (!column.has_value() || schema.column(*column).is_categorical()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "bandwidth given for '", name,
          "', which is not a continuous attribute"));
    }
  }
  std::vector<KernelColumn> kernels;
  bool any_continuous = false;
  for (size_t c = 0; c < schema.column_count(); ++c) {
    const AttributeSpec& spec = schema.column(c);
    KernelColumn k;
    k.column = c;
    k.categorical = spec.is_categorical();
    k.in_x = c == schema.observable_column();
    if (!k.categorical) {
      std::optional<double> h = bandwidths.Find(spec.name());
      if (!h.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "no bandwidth for continuous attribute '", spec.name(), "'"));
      }
      k.inv_h = 1.0 / *h;
      k.norm = 1.0 / (*h * std::sqrt(2.0 * std::numbers::pi));
      any_continuous = true;
    }
    kernels.push_back(k);
  }
  if (!any_continuous && !options.allow_indicator_only) {
    return absl::FailedPreconditionError(
        "kernel estimation needs a continuous attribute; use plug-in counts "
        "for all-categorical data");
  }
  return kernels;
}

// Sums kernel products for points[begin, end) into the output slots.
void EvaluateRange(const SampleSet& samples,
                   const std::vector<KernelColumn>& kernels,
                   std::span<const size_t> points, size_t begin, size_t end,
                   LogDensities& out) {
  const size_t n = samples.size();
  for (size_t p = begin; p < end; ++p) {
    const size_t i = points[p];
    double joint = 0.0;
    double px = 0.0;
    double ps = 0.0;
    for (size_t j = 0; j < n; ++j) {
      double kx = 1.0;
      double ks = 1.0;
      for (const KernelColumn& k : kernels) {
        const double f = KernelFactor(k, samples, i, j);
        if (k.in_x) {
          kx *= f;
        } else {
          ks *= f;
        }
      }
      joint += kx * ks;
      px += kx;
      ps += ks;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    out.joint[p] = std::log(joint * inv_n);
    out.x[p] = std::log(px * inv_n);
    out.s[p] = std::log(ps * inv_n);
  }
}

}  // namespace

absl::string_view MethodName(EstimationMethod method) {
  switch (method) {
    case EstimationMethod::kAuto:
      return "auto";
    case EstimationMethod::kPlugInCounts:
      return "plug-in-counts";
    case EstimationMethod::kKdeMonteCarlo:
      return "kde-monte-carlo";
  }
  return "unknown";
}

absl::StatusOr<EstimationMethod> ParseMethod(absl::string_view name) {
  if (name == "auto") return EstimationMethod::kAuto;
  if (name == "plug-in-counts" || name == "plugin" || name == "counts") {
    return EstimationMethod::kPlugInCounts;
  }
  if (name == "kde-monte-carlo" || name == "kde") {
    return EstimationMethod::kKdeMonteCarlo;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown estimation method '", name, "' (expected auto, plugin, kde)"));
}

absl::Status BandwidthSet::Set(std::string attribute, double width) {
  if (!std::isfinite(width) || !(width > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bandwidth for '", attribute, "' must be positive, got ", width));
  }
  widths_[std::move(attribute)] = width;
  return absl::OkStatus();
}

std::optional<double> BandwidthSet::Find(absl::string_view attribute) const {
  auto it = widths_.find(attribute);
  if (it == widths_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<BandwidthSet> ParseBandwidthSpec(absl::string_view spec) {
  BandwidthSet set;
  for (absl::string_view entry :
       absl::StrSplit(spec, ';', absl::SkipWhitespace())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(entry, absl::MaxSplits('=', 1));
    double h = 0.0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(kv.second), &h)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bandwidth entry '", entry, "' must look like name=h"));
    }
    PRIVLEAK_RETURN_IF_ERROR(
        set.Set(std::string(absl::StripAsciiWhitespace(kv.first)), h));
  }
  return set;
}

absl::StatusOr<double> SilvermanBandwidth(std::span<const double> values) {
  const size_t n = values.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        "Silverman's rule needs at least two values");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    return absl::FailedPreconditionError(
        "values have zero variance; bandwidth is undefined");
  }
  return 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
}

absl::StatusOr<BandwidthSet> SilvermanBandwidths(const SampleSet& samples) {
  BandwidthSet set;
  const ProfileSchema& schema = samples.schema();
  for (size_t c = 0; c < schema.column_count(); ++c) {
    const AttributeSpec& spec = schema.column(c);
    if (spec.is_categorical()) continue;
    absl::StatusOr<double> h = SilvermanBandwidth(samples.reals(c));
    if (!h.ok()) {
      return absl::Status(h.status().code(),
                          absl::StrCat("attribute '", spec.name(), "': ",
                                       h.status().message()));
    }
    PRIVLEAK_RETURN_IF_ERROR(set.Set(spec.name(), *h));
  }
  return set;
}

absl::StatusOr<JointTable> EmpiricalJoint(const SampleSet& samples) {
  const ProfileSchema& schema = samples.schema();
  if (!schema.all_categorical()) {
    return absl::FailedPreconditionError(
        "plug-in counts need all-categorical samples; discretize first");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(std::vector<std::string> s_labels,
                            BuildIntersectionLabels(schema));
  const std::vector<std::string>& x_labels = schema.observable().levels();

  // Column index of a sample: mixed-radix number over the protected codes,
  // first attribute most significant, matching BuildIntersectionLabels.
  std::vector<double> counts(x_labels.size() * s_labels.size(), 0.0);
  const size_t n = samples.size();
  const size_t x_col = schema.observable_column();
  for (size_t i = 0; i < n; ++i) {
    size_t col = 0;
    for (size_t a = 0; a < schema.protected_count(); ++a) {
      col = col * schema.attributes()[a].levels().size() +
            static_cast<size_t>(samples.codes(a)[i]);
    }
    const size_t row = static_cast<size_t>(samples.codes(x_col)[i]);
    counts[row * s_labels.size() + col] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(n);
  PRIVLEAK_ASSIGN_OR_RETURN(
      JointTable table,
      JointTable::Create(x_labels, std::move(s_labels), std::move(counts)));
  return AttachSchema(table, schema);
}

absl::StatusOr<LogDensities> KdeLogDensitiesAt(const SampleSet& samples,
                                               const BandwidthSet& bandwidths,
                                               std::span<const size_t> points,
                                               const KdeOptions& options) {
  if (samples.size() < 2) {
    return absl::InvalidArgumentError(
        "kernel estimation needs at least two samples");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(std::vector<KernelColumn> kernels,
                            BuildKernels(samples, bandwidths, options));
  for (size_t i : points) {
    if (i >= samples.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("evaluation point ", i, " out of range"));
    }
  }

  LogDensities out;
  out.points.assign(points.begin(), points.end());
  out.joint.resize(points.size());
  out.x.resize(points.size());
  out.s.resize(points.size());

  // Each thread owns a disjoint slice of output slots; every slot is summed
  // in the same sample order, so results do not depend on the thread count.
  const size_t workers = std::clamp<size_t>(
      std::thread::hardware_concurrency(), 1,
      std::max<size_t>(1, points.size() / 64));
  if (workers <= 1) {
    EvaluateRange(samples, kernels, points, 0, points.size(), out);
  } else {
    std::vector<std::jthread> threads;
    const size_t chunk = (points.size() + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
      const size_t begin = w * chunk;
      const size_t end = std::min(points.size(), begin + chunk);
      if (begin >= end) break;
      threads.emplace_back([&, begin, end] {
        EvaluateRange(samples, kernels, points, begin, end, out);
      });
    }
  }

  for (size_t p = 0; p < points.size(); ++p) {
    if (!(out.joint[p] >= kLogDensityFloor)) {
      return absl::OutOfRangeError(absl::StrCat(
          "joint density underflows at sample ", points[p],
          "; bandwidth too small"));
    }
    if (!(out.x[p] >= kLogDensityFloor) || !(out.s[p] >= kLogDensityFloor)) {
      out.floored_marginals.push_back(points[p]);
      out.x[p] = std::max(out.x[p], kLogDensityFloor);
      out.s[p] = std::max(out.s[p], kLogDensityFloor);
    }
  }
  return out;
}

absl::StatusOr<LogDensities> KdeLogDensities(const SampleSet& samples,
                                             const BandwidthSet& bandwidths,
                                             const KdeOptions& options) {
  std::vector<size_t> points(samples.size());
  for (size_t i = 0; i < points.size(); ++i) points[i] = i;
  return KdeLogDensitiesAt(samples, bandwidths, points, options);
}

absl::StatusOr<Densities> KdeDensitiesAtPoint(
    const SampleSet& samples, const BandwidthSet& bandwidths,
    const std::vector<SampleSet::Value>& query, const KdeOptions& options) {
  const ProfileSchema& schema = samples.schema();
  if (samples.size() < 2) {
    return absl::InvalidArgumentError(
        "kernel estimation needs at least two samples");
  }
  if (query.size() != schema.column_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("query has ", query.size(), " values, schema has ",
                     schema.column_count(), " columns"));
  }
  PRIVLEAK_ASSIGN_OR_RETURN(std::vector<KernelColumn> kernels,
                            BuildKernels(samples, bandwidths, options));
  std::vector<int> codes(kernels.size(), 0);
  std::vector<double> reals(kernels.size(), 0.0);
  for (const KernelColumn& k : kernels) {
    const AttributeSpec& spec = schema.column(k.column);
    if (k.categorical) {
      const std::string* label = std::get_if<std::string>(&query[k.column]);
      std::optional<int> code;
      if (label != nullptr) code = spec.LevelIndex(*label);
      if (!code.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "query value for '", spec.name(), "' is not a declared level"));
      }
      codes[k.column] = *code;
    } else {
      const double* value = std::get_if<double>(&query[k.column]);
      if (value == nullptr || !std::isfinite(*value)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "query value for '", spec.name(), "' must be a finite number"));
      }
      reals[k.column] = *value;
    }
  }

  Densities out;
  const size_t n = samples.size();
  for (size_t j = 0; j < n; ++j) {
    double kx = 1.0;
    double ks = 1.0;
    for (const KernelColumn& k : kernels) {
      double f = 0.0;
      if (k.categorical) {
        f = samples.codes(k.column)[j] == codes[k.column] ? 1.0 : 0.0;
      } else {
        const double u =
            (reals[k.column] - samples.reals(k.column)[j]) * k.inv_h;
        f = k.norm * std::exp(-0.5 * u * u);
      }
      (k.in_x ? kx : ks) *= f;
    }
    out.joint += kx * ks;
    out.x += kx;
    out.s += ks;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  out.joint *= inv_n;
  out.x *= inv_n;
  out.s *= inv_n;
  return out;
}

absl::StatusOr<MiEstimate> McMutualInformation(const SampleSet& samples,
                                               const BandwidthSet& bandwidths,
                                               uint64_t seed,
                                               const McOptions& options) {
  const size_t n = samples.size();
  std::vector<size_t> points(n);
  for (size_t i = 0; i < n; ++i) points[i] = i;
  if (options.max_eval_points > 0 && options.max_eval_points < n) {
    std::mt19937_64 rng(seed);
    for (size_t i = 0; i < options.max_eval_points; ++i) {
      std::uniform_int_distribution<size_t> pick(i, n - 1);
      std::swap(points[i], points[pick(rng)]);
    }
    points.resize(options.max_eval_points);
    std::sort(points.begin(), points.end());
  }

  KdeOptions kde;
  kde.allow_indicator_only = options.allow_indicator_only;
  PRIVLEAK_ASSIGN_OR_RETURN(
      LogDensities densities,
      KdeLogDensitiesAt(samples, bandwidths, points, kde));
  double sum = 0.0;
  for (size_t p = 0; p < points.size(); ++p) {
    sum += densities.joint[p] - densities.x[p] - densities.s[p];
  }
  MiEstimate estimate;
  estimate.raw_nats = sum / static_cast<double>(points.size());
  estimate.value = Nats(std::max(0.0, estimate.raw_nats));
  estimate.n = n;
  estimate.eval_points = points.size();
  estimate.method = EstimationMethod::kKdeMonteCarlo;
  estimate.seed = seed;
  estimate.bandwidths = bandwidths;
  if (!densities.floored_marginals.empty()) {
    estimate.warnings.push_back(absl::StrCat(
        densities.floored_marginals.size(),
        " marginal densities floored at exp(", kLogDensityFloor,
        "); first at sample ", densities.floored_marginals.front()));
  }
  if (estimate.raw_nats < 0.0) {
    estimate.warnings.push_back(absl::StrFormat(
        "negative raw estimate %.6g nats clamped to 0", estimate.raw_nats));
  }
  return estimate;
}

absl::StatusOr<MiEstimate> EstimateMutualInformation(
    const SampleSet& samples, const EstimateOptions& options) {
  EstimationMethod method = options.method;
  if (method == EstimationMethod::kAuto) {
    method = samples.schema().all_categorical()
                 ? EstimationMethod::kPlugInCounts
                 : EstimationMethod::kKdeMonteCarlo;
  }
  if (method == EstimationMethod::kPlugInCounts) {
    if (!options.bandwidth_overrides.empty()) {
      return absl::InvalidArgumentError(
          "bandwidths do not apply to plug-in counts");
    }
    PRIVLEAK_ASSIGN_OR_RETURN(JointTable table, EmpiricalJoint(samples));
    PRIVLEAK_ASSIGN_OR_RETURN(MutualInfo mi,
                              MutualInformation(table, InfoUnit::kNats));
    MiEstimate estimate;
    estimate.value = mi.value;
    estimate.raw_nats = mi.raw_nats;
    estimate.n = samples.size();
    estimate.eval_points = samples.size();
    estimate.method = method;
    if (mi.clamped) {
      estimate.warnings.push_back("negative round-off clamped to 0");
    }
    return estimate;
  }

  BandwidthSet bandwidths;
  const ProfileSchema& schema = samples.schema();
  for (size_t c = 0; c < schema.column_count(); ++c) {
    const AttributeSpec& spec = schema.column(c);
    if (spec.is_categorical()) continue;
    std::optional<double> h = options.bandwidth_overrides.Find(spec.name());
    if (!h.has_value()) {
      absl::StatusOr<double> silverman = SilvermanBandwidth(samples.reals(c));
      if (!silverman.ok()) {
        return absl::Status(silverman.status().code(),
                            absl::StrCat("attribute '", spec.name(), "': ",
                                         silverman.status().message()));
      }
      h = *silverman;
    }
    PRIVLEAK_RETURN_IF_ERROR(bandwidths.Set(spec.name(), *h));
  }
  for (const auto& [name, h] : options.bandwidth_overrides.widths()) {
    if (!bandwidths.Find(name).has_value()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "bandwidth given for '", name,
          "', which is not a continuous attribute"));
    }
  }
  McOptions mc;
  mc.max_eval_points = options.max_eval_points;
  mc.allow_indicator_only = options.method == EstimationMethod::kKdeMonteCarlo;
  return McMutualInformation(samples, bandwidths, options.seed, mc);
}

}  // namespace privleak
