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

#include "core/pricing.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "core/csv.h"
#include "core/status_macros.h"
#include "json.hpp"

namespace privleak {
namespace {

using ::nlohmann::json;

absl::StatusOr<Money> MoneyFromJson(const json& node, absl::string_view key) {
  if (node.is_string()) {
    absl::StatusOr<Money> m = Money::Parse(node.get<std::string>());
    if (!m.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", key, "': ", m.status().message()));
    }
    return m;
  }
  if (node.is_number()) return Money::FromDouble(node.get<double>());
  return absl::InvalidArgumentError(
      absl::StrCat("'", key, "' must be a number or decimal string"));
}

absl::StatusOr<double> PositiveNumber(const json& node, absl::string_view key) {
  if (!node.is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", key, "' must be a number"));
  }
  return node.get<double>();
}

std::set<absl::string_view> NameSet(absl::string_view key) {
  std::set<absl::string_view> names;
  for (absl::string_view part : absl::StrSplit(key, kSubsetKeySeparator)) {
    names.insert(part);
  }
  return names;
}

absl::StatusOr<Money> Surcharge(double amount) {
  PRIVLEAK_ASSIGN_OR_RETURN(Money m, Money::FromDouble(amount));
  return std::max(m, Money());
}

PriceQuote MakeQuote(const PricingPolicy& policy, Money surcharge,
                     InfoQuantity leakage, PricingRule rule) {
  PriceQuote quote;
  quote.production_component = policy.production_cost;
  quote.surcharge_component = surcharge;
  quote.total = policy.production_cost + surcharge;
  quote.leakage = leakage;
  quote.rule = rule;
  return quote;
}

absl::Status CheckLeakage(InfoQuantity leakage) {
  if (!std::isfinite(leakage.value) || leakage.value < 0.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "leakage must be a nonnegative number, got ", leakage.value));
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view RuleName(PricingRule rule) {
  switch (rule) {
    case PricingRule::kLinear:
      return "linear";
    case PricingRule::kWeighted:
      return "weighted";
    case PricingRule::kExposure:
      return "exposure";
  }
  return "unknown";
}

absl::StatusOr<PricingRule> ParseRule(absl::string_view name) {
  if (name == "linear") return PricingRule::kLinear;
  if (name == "weighted") return PricingRule::kWeighted;
  if (name == "exposure") return PricingRule::kExposure;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown pricing rule '", name,
      "' (expected linear, weighted or exposure)"));
}

absl::Status PricingPolicy::Validate() const {
  if (production_cost < Money()) {
    return absl::InvalidArgumentError("c_p must be nonnegative");
  }
  if (lambda_per_nat.has_value() && !subset_lambdas_per_nat.empty()) {
    return absl::InvalidArgumentError(
        "policy gives both a scalar lambda and per-subset lambdas");
  }
  if (lambda_per_nat.has_value() &&
      (!std::isfinite(*lambda_per_nat) || !(*lambda_per_nat > 0.0))) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda must be positive, got ", *lambda_per_nat));
  }
  bool any_positive = false;
  for (const auto& [key, lambda] : subset_lambdas_per_nat) {
    if (key.empty()) {
      return absl::InvalidArgumentError("empty subset key in lambda map");
    }
    if (!std::isfinite(lambda) || lambda < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "lambda for subset '", key, "' must be nonnegative"));
    }
    any_positive |= lambda > 0.0;
  }
  if (!subset_lambdas_per_nat.empty() && !any_positive) {
    return absl::InvalidArgumentError(
        "per-subset lambdas need at least one positive entry");
  }
  if (pi_max.has_value() && !(*pi_max > Money())) {
    return absl::InvalidArgumentError("pi_max must be positive");
  }
  if (exchange_rate.has_value() &&
      (!std::isfinite(*exchange_rate) || !(*exchange_rate > 0.0))) {
    return absl::InvalidArgumentError("exchange_rate must be positive");
  }
  if (currency.empty()) {
    return absl::InvalidArgumentError("currency code is empty");
  }
  return absl::OkStatus();
}

absl::StatusOr<PricingPolicy> ParsePolicyJson(absl::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr,
                         /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::DataLossError("policy document is not valid JSON");
  }
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("policy document must be an object");
  }
  static const std::set<std::string> kKnownKeys = {
      "c_p",      "lambda",        "lambda_unit",          "pi_max",
      "currency", "exchange_rate", "exchange_rate_applied"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown policy field '", key, "'"));
    }
  }
  if (doc.contains("exchange_rate") && doc.contains("exchange_rate_applied")) {
    return absl::InvalidArgumentError(
        "policy gives both exchange_rate and exchange_rate_applied");
  }

  PricingPolicy policy;
  if (!doc.contains("c_p")) {
    return absl::InvalidArgumentError("policy needs 'c_p'");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(policy.production_cost,
                            MoneyFromJson(doc["c_p"], "c_p"));
  if (doc.contains("pi_max")) {
    PRIVLEAK_ASSIGN_OR_RETURN(Money pi_max,
                              MoneyFromJson(doc["pi_max"], "pi_max"));
    policy.pi_max = pi_max;
  }
  if (doc.contains("currency")) {
    if (!doc["currency"].is_string()) {
      return absl::InvalidArgumentError("'currency' must be a string");
    }
    policy.currency = doc["currency"].get<std::string>();
  }

  InfoUnit lambda_per = InfoUnit::kNats;
  if (doc.contains("lambda_unit")) {
    const json& unit = doc["lambda_unit"];
    if (unit == "per_nat") {
      lambda_per = InfoUnit::kNats;
    } else if (unit == "per_bit") {
      lambda_per = InfoUnit::kBits;
    } else {
      return absl::InvalidArgumentError(
          "'lambda_unit' must be per_nat or per_bit");
    }
  }
  std::optional<double> rate;
  if (doc.contains("exchange_rate")) {
    PRIVLEAK_ASSIGN_OR_RETURN(double r,
                              PositiveNumber(doc["exchange_rate"],
                                             "exchange_rate"));
    rate = r;
  }
  if (doc.contains("exchange_rate_applied")) {
    PRIVLEAK_ASSIGN_OR_RETURN(
        double r, PositiveNumber(doc["exchange_rate_applied"],
                                 "exchange_rate_applied"));
    policy.exchange_rate = r;
  }

  auto canonical = [&](double lambda) -> absl::StatusOr<double> {
    return ConvertLambda(lambda, lambda_per, InfoUnit::kNats, rate);
  };
  if (doc.contains("lambda")) {
    const json& lambda = doc["lambda"];
    if (lambda.is_number()) {
      PRIVLEAK_ASSIGN_OR_RETURN(double l, canonical(lambda.get<double>()));
      policy.lambda_per_nat = l;
    } else if (lambda.is_object()) {
      for (const auto& [key, value] : lambda.items()) {
        if (!value.is_number()) {
          return absl::InvalidArgumentError(
              absl::StrCat("lambda for subset '", key, "' must be a number"));
        }
        PRIVLEAK_ASSIGN_OR_RETURN(double l, canonical(value.get<double>()));
        policy.subset_lambdas_per_nat[key] = l;
      }
    } else {
      return absl::InvalidArgumentError(
          "'lambda' must be a number or an object keyed by subset");
    }
  }
  if (rate.has_value()) policy.exchange_rate = rate;
  PRIVLEAK_RETURN_IF_ERROR(policy.Validate());
  return policy;
}

absl::StatusOr<PricingPolicy> LoadPolicy(const std::string& path) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParsePolicyJson(text);
}

std::string PolicyToJson(const PricingPolicy& policy) {
  json doc = json::object();
  doc["c_p"] = policy.production_cost.ToString();
  doc["currency"] = policy.currency;
  doc["lambda_unit"] = "per_nat";
  if (policy.lambda_per_nat.has_value()) {
    doc["lambda"] = *policy.lambda_per_nat;
  } else if (!policy.subset_lambdas_per_nat.empty()) {
    doc["lambda"] = policy.subset_lambdas_per_nat;
  }
  if (policy.pi_max.has_value()) doc["pi_max"] = policy.pi_max->ToString();
  if (policy.exchange_rate.has_value()) {
    doc["exchange_rate_applied"] = *policy.exchange_rate;
  }
  return doc.dump();
}

absl::StatusOr<PriceQuote> PriceLinear(const PricingPolicy& policy,
                                       InfoQuantity leakage) {
  PRIVLEAK_RETURN_IF_ERROR(CheckLeakage(leakage));
  if (!policy.subset_lambdas_per_nat.empty()) {
    return absl::FailedPreconditionError(
        "policy carries per-subset lambdas; use the weighted rule");
  }
  if (!policy.lambda_per_nat.has_value()) {
    return absl::FailedPreconditionError("policy has no scalar lambda");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(Money surcharge,
                            Surcharge(*policy.lambda_per_nat * leakage.nats()));
  return MakeQuote(policy, surcharge, leakage, PricingRule::kLinear);
}

absl::StatusOr<PriceQuote> PriceWeighted(const PricingPolicy& policy,
                                         const LeakageReport& report) {
  if (policy.subset_lambdas_per_nat.empty()) {
    return absl::FailedPreconditionError(
        "policy has no per-subset lambdas; use the linear rule");
  }
  if (report.empty()) {
    return absl::InvalidArgumentError("leakage report is empty");
  }
  double surcharge = 0.0;
  for (const auto& [key, lambda] : policy.subset_lambdas_per_nat) {
    const std::set<absl::string_view> wanted = NameSet(key);
    const LeakageEntry* match = nullptr;
    for (const LeakageEntry& entry : report) {
      if (NameSet(entry.key) == wanted) {
        match = &entry;
        break;
      }
    }
    if (match == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "policy subset '", key, "' has no entry in the leakage report"));
    }
    surcharge += lambda * match->value.nats();
  }
  // The largest subset is the full joint profile.
  const LeakageEntry& full = *std::max_element(
      report.begin(), report.end(),
      [](const LeakageEntry& a, const LeakageEntry& b) {
        return a.attributes.size() < b.attributes.size();
      });
  PRIVLEAK_ASSIGN_OR_RETURN(Money money, Surcharge(surcharge));
  return MakeQuote(policy, money, full.value, PricingRule::kWeighted);
}

absl::StatusOr<PriceQuote> PriceExposure(const PricingPolicy& policy,
                                         const JointTable& table) {
  if (!policy.pi_max.has_value()) {
    return absl::FailedPreconditionError(
        "exposure pricing needs pi_max in the policy");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(double ratio, ExposureRatio(table));
  PRIVLEAK_ASSIGN_OR_RETURN(MutualInfo mi,
                            MutualInformation(table, InfoUnit::kNats));
  PRIVLEAK_ASSIGN_OR_RETURN(Money surcharge,
                            Surcharge(ratio * policy.pi_max->ToDouble()));
  surcharge = std::min(surcharge, *policy.pi_max);
  return MakeQuote(policy, surcharge, mi.value, PricingRule::kExposure);
}

absl::StatusOr<double> CalibrateLambda(Money pi_max,
                                       InfoQuantity baseline_entropy) {
  if (!(pi_max > Money())) {
    return absl::InvalidArgumentError("pi_max must be positive");
  }
  const double h = baseline_entropy.nats();
  if (!std::isfinite(h) || !(h > 0.0)) {
    return absl::InvalidArgumentError(
        "baseline entropy must be positive to calibrate lambda");
  }
  return pi_max.ToDouble() / h;
}

absl::StatusOr<double> ConvertLambda(double lambda, InfoUnit from_per,
                                     InfoUnit to_per,
                                     std::optional<double> exchange_rate) {
  if (!std::isfinite(lambda)) {
    return absl::InvalidArgumentError("lambda is not finite");
  }
  if (exchange_rate.has_value() &&
      (!std::isfinite(*exchange_rate) || !(*exchange_rate > 0.0))) {
    return absl::InvalidArgumentError(absl::StrCat(
        "exchange rate must be positive, got ", *exchange_rate));
  }
  double out = lambda;
  if (from_per == InfoUnit::kNats && to_per == InfoUnit::kBits) out *= kLn2;
  if (from_per == InfoUnit::kBits && to_per == InfoUnit::kNats) out /= kLn2;
  if (exchange_rate.has_value()) out *= *exchange_rate;
  return out;
}

absl::StatusOr<std::vector<CurvePoint>> PriceCurve(
    const PricingPolicy& policy, PricingRule rule, const CurveRange& range,
    std::optional<double> baseline_entropy_nats) {
  if (!std::isfinite(range.from) || !std::isfinite(range.to) ||
      !std::isfinite(range.step) || !(range.step > 0.0) || range.from < 0.0 ||
      range.to < range.from) {
    return absl::InvalidArgumentError(absl::StrCat(
        "invalid curve range [", range.from, ", ", range.to, "] step ",
        range.step));
  }
  double intercept = policy.production_cost.ToDouble();
  double slope = 0.0;
  switch (rule) {
    case PricingRule::kLinear:
      if (!policy.lambda_per_nat.has_value()) {
        return absl::FailedPreconditionError(
            "linear curve needs a scalar lambda");
      }
      slope = *policy.lambda_per_nat;
      break;
    case PricingRule::kExposure: {
      if (!policy.pi_max.has_value()) {
        return absl::FailedPreconditionError("exposure curve needs pi_max");
      }
      if (!baseline_entropy_nats.has_value() ||
          !(*baseline_entropy_nats > 0.0)) {
        return absl::InvalidArgumentError(
            "exposure curve needs a positive baseline entropy H(S)");
      }
      const double h = *baseline_entropy_nats;
      if (range.to > h * (1.0 + 1e-12)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "exposure curve range ends at ", range.to,
            " nats, beyond H(S) = ", h));
      }
      slope = policy.pi_max->ToDouble() / h;
      break;
    }
    case PricingRule::kWeighted:
      return absl::InvalidArgumentError(
          "price curves support the linear and exposure rules");
  }

  const size_t steps = static_cast<size_t>(
      std::floor((range.to - range.from) / range.step + 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 2);
  for (size_t k = 0; k <= steps; ++k) {
    grid.push_back(
        std::min(range.to, range.from + static_cast<double>(k) * range.step));
  }
  // The range end is always a point, even when the step does not divide it.
  if (range.to - grid.back() > 1e-9 * range.step) grid.push_back(range.to);

  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (double leakage : grid) {
    CurvePoint point;
    point.leakage_nats = leakage;
    double surcharge = slope * point.leakage_nats;
    if (rule == PricingRule::kExposure) {
      // r is computed as a ratio so that I = H(S) lands exactly on pi_max.
      surcharge = std::min(1.0, point.leakage_nats / *baseline_entropy_nats) *
                  policy.pi_max->ToDouble();
    }
    point.value = intercept + surcharge;
    PRIVLEAK_ASSIGN_OR_RETURN(Money money, Surcharge(surcharge));
    point.price = policy.production_cost + money;
    curve.push_back(point);
  }
  for (size_t k = 1; k + 1 < curve.size(); ++k) {
    const double a = (curve[k].value - curve[k - 1].value) /
                     (curve[k].leakage_nats - curve[k - 1].leakage_nats);
    const double b = (curve[k + 1].value - curve[k].value) /
                     (curve[k + 1].leakage_nats - curve[k].leakage_nats);
    if (std::abs(a - b) > 1e-6 * std::max({1.0, std::abs(a), std::abs(b)})) {
      return absl::InternalError(absl::StrFormat(
          "curve slope changes between points %d and %d", k - 1, k + 1));
    }
  }
  return curve;
}

std::string CurveToCsv(const std::vector<CurvePoint>& curve) {
  std::string out = "leakage,value\n";
  for (const CurvePoint& point : curve) {
    absl::StrAppend(&out, absl::StrFormat("%.6f", point.leakage_nats), ",",
                    point.price.ToString(), "\n");
  }
  return out;
}

}  // namespace privleak
