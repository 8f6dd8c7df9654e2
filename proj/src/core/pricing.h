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

#ifndef PRIVLEAK_CORE_PRICING_H_
#define PRIVLEAK_CORE_PRICING_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "core/info_units.h"
#include "core/infotheory.h"
#include "core/money.h"

namespace privleak {

enum class PricingRule { kLinear, kWeighted, kExposure };

absl::string_view RuleName(PricingRule rule);
absl::StatusOr<PricingRule> ParseRule(absl::string_view name);

// All multipliers are stored per nat in `currency`. Per-bit inputs and
// exchange rates are folded in when a policy document is parsed.
struct PricingPolicy {
  Money production_cost;                 // c_p
  std::optional<double> lambda_per_nat;  // scalar rule
  // Per-subset multipliers keyed like "sex+disability".
  std::map<std::string, double> subset_lambdas_per_nat;
  std::optional<Money> pi_max;           // statutory maximum penalty
  std::string currency = "USD";
  // Rate already applied to the multipliers, kept for the record.
  std::optional<double> exchange_rate;

  absl::Status Validate() const;

  friend bool operator==(const PricingPolicy&, const PricingPolicy&) = default;
};

// Policy documents are JSON objects with keys c_p, lambda (number, or an
// object keyed by subset), lambda_unit (per_nat | per_bit), pi_max,
// currency and exchange_rate. The exchange rate converts lambda from the
// quoting currency into `currency`.
absl::StatusOr<PricingPolicy> ParsePolicyJson(absl::string_view json);
absl::StatusOr<PricingPolicy> LoadPolicy(const std::string& path);

// Canonical form: lambda per nat, rate recorded as exchange_rate_applied.
// Parsing the canonical form yields an equal policy.
std::string PolicyToJson(const PricingPolicy& policy);

struct PriceQuote {
  Money total;
  Money production_component;
  Money surcharge_component;
  InfoQuantity leakage;
  PricingRule rule = PricingRule::kLinear;
};

// V = c_p + lambda * I, with I taken in nats.
absl::StatusOr<PriceQuote> PriceLinear(const PricingPolicy& policy,
                                       InfoQuantity leakage);

// V = c_p + sum_i lambda_i * I(X; S_i). Every subset in the policy must
// appear in the report.
absl::StatusOr<PriceQuote> PriceWeighted(const PricingPolicy& policy,
                                         const LeakageReport& report);

// V = c_p + (I / H(S)) * pi_max.
absl::StatusOr<PriceQuote> PriceExposure(const PricingPolicy& policy,
                                         const JointTable& table);

// lambda = pi_max / H(S), per nat.
absl::StatusOr<double> CalibrateLambda(Money pi_max,
                                       InfoQuantity baseline_entropy);

// Per-bit multiplier = per-nat multiplier * ln 2. A present exchange rate
// scales the result.
absl::StatusOr<double> ConvertLambda(double lambda, InfoUnit from_per,
                                     InfoUnit to_per,
                                     std::optional<double> exchange_rate);

struct CurveRange {
  double from = 0.0;
  double to = 1.0;
  double step = 0.1;
};

struct CurvePoint {
  double leakage_nats = 0.0;
  double value = 0.0;  // unrounded
  Money price;
};

// Evenly spaced prices over a leakage range in nats. The exposure rule
// needs the baseline entropy and a range inside [0, H(S)]. Consecutive
// slopes are checked for equality before returning.
absl::StatusOr<std::vector<CurvePoint>> PriceCurve(
    const PricingPolicy& policy, PricingRule rule, const CurveRange& range,
    std::optional<double> baseline_entropy_nats = std::nullopt);

// "leakage,value" header, one row per point.
std::string CurveToCsv(const std::vector<CurvePoint>& curve);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_PRICING_H_
