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

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "core/infotheory.h"
#include "core/money.h"
#include "core/schema.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace privleak {
namespace {

using ::testing::HasSubstr;

constexpr double kLn2 = std::numbers::ln2;

std::string DataPath(const std::string& name) {
  return std::string(PRIVLEAK_TEST_DATA) + "/" + name;
}

Money Usd(const char* text) { return *Money::Parse(text); }

PricingPolicy ScalarPolicy(const char* c_p, double lambda_per_nat) {
  PricingPolicy policy;
  policy.production_cost = Usd(c_p);
  policy.lambda_per_nat = lambda_per_nat;
  return policy;
}

TEST(MoneyTest, ParsesAndFormatsFourDecimals) {
  EXPECT_EQ(Usd("13600").ToString(), "13600.0000");
  EXPECT_EQ(Usd("0.001").minor_units(), 10);
  EXPECT_EQ(Usd("-12.5").ToString(), "-12.5000");
  EXPECT_EQ(Usd("0.0010").ToString(), "0.0010");
  EXPECT_FALSE(Money::Parse("1.00001").ok());
  EXPECT_FALSE(Money::Parse("").ok());
  EXPECT_FALSE(Money::Parse("12x").ok());
  EXPECT_FALSE(Money::Parse("1e3").ok());
}

TEST(MoneyTest, RoundsHalfToEven) {
  EXPECT_EQ(Money::FromDouble(0.00005)->minor_units(), 0);
  EXPECT_EQ(Money::FromDouble(0.00035)->minor_units(), 4);
  EXPECT_EQ(Money::FromDouble(0.00025)->minor_units(), 2);
  EXPECT_EQ(Money::FromDouble(2.5)->minor_units(), 25000);
  EXPECT_EQ(Money::FromDouble(-0.00035)->minor_units(), -4);
  EXPECT_EQ(Money::FromDouble(-0.00025)->minor_units(), -2);
  EXPECT_FALSE(Money::FromDouble(INFINITY).ok());
  EXPECT_FALSE(Money::FromDouble(NAN).ok());
  EXPECT_FALSE(Money::FromDouble(1e300).ok());
}

TEST(MoneyTest, SumsAreExact) {
  Money total;
  for (int i = 0; i < 1000; ++i) total += Usd("0.0001");
  EXPECT_EQ(total, Usd("0.1"));
  EXPECT_LT(Usd("1"), Usd("1.0001"));
}

TEST(PolicyTest, PerBitMultiplierIsStoredPerNat) {
  absl::StatusOr<PricingPolicy> policy = ParsePolicyJson(
      R"({"c_p": 0, "lambda": 100000, "lambda_unit": "per_bit"})");
  ASSERT_TRUE(policy.ok()) << policy.status();
  EXPECT_NEAR(*policy->lambda_per_nat, 100000 / kLn2, 1e-9);
  EXPECT_EQ(policy->currency, "USD");
}

TEST(PolicyTest, ExchangeRateScalesLambdaOnly) {
  absl::StatusOr<PricingPolicy> policy = ParsePolicyJson(
      R"({"c_p": "5", "lambda": 1000, "currency": "EUR",
          "exchange_rate": 0.9})");
  ASSERT_TRUE(policy.ok()) << policy.status();
  EXPECT_NEAR(*policy->lambda_per_nat, 900.0, 1e-9);
  EXPECT_EQ(policy->production_cost, Usd("5"));
  EXPECT_EQ(policy->exchange_rate, 0.9);
}

TEST(PolicyTest, CanonicalJsonRoundTrips) {
  for (const char* file : {"policy_per_bit.json", "policy_weighted.json",
                           "policy_exposure.json"}) {
    absl::StatusOr<PricingPolicy> policy = LoadPolicy(DataPath(file));
    ASSERT_TRUE(policy.ok()) << file << ": " << policy.status();
    absl::StatusOr<PricingPolicy> again =
        ParsePolicyJson(PolicyToJson(*policy));
    ASSERT_TRUE(again.ok()) << again.status();
    EXPECT_EQ(*again, *policy) << file;
  }
  absl::StatusOr<PricingPolicy> fx = ParsePolicyJson(
      R"({"c_p": 1, "lambda": 10, "exchange_rate": 2})");
  ASSERT_TRUE(fx.ok());
  EXPECT_EQ(*ParsePolicyJson(PolicyToJson(*fx)), *fx);
}

TEST(PolicyTest, RejectsBadDocuments) {
  EXPECT_EQ(ParsePolicyJson("{").status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_THAT(
      ParsePolicyJson(R"({"c_p": 0, "lambda": 1, "lamda": 2})")
          .status()
          .message(),
      HasSubstr("lamda"));
  EXPECT_FALSE(ParsePolicyJson(R"({"lambda": 1})").ok());
  EXPECT_FALSE(ParsePolicyJson(R"({"c_p": -1, "lambda": 1})").ok());
  EXPECT_FALSE(ParsePolicyJson(R"({"c_p": 0, "lambda": -1})").ok());
  EXPECT_FALSE(
      ParsePolicyJson(R"({"c_p": 0, "lambda": 1, "lambda_unit": "x"})").ok());
  EXPECT_FALSE(
      ParsePolicyJson(R"({"c_p": 0, "lambda": 1, "exchange_rate": 0})").ok());
  EXPECT_FALSE(ParsePolicyJson(R"({"c_p": 0, "pi_max": "0"})").ok());
  EXPECT_FALSE(ParsePolicyJson("[1, 2]").ok());
  EXPECT_EQ(LoadPolicy(DataPath("missing.json")).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(LinearPriceTest, PerBitExample) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_per_bit.json"));
  absl::StatusOr<PriceQuote> quote = PriceLinear(policy, Bits(0.136));
  ASSERT_TRUE(quote.ok()) << quote.status();
  EXPECT_EQ(quote->total, Usd("13600"));
  EXPECT_EQ(quote->production_component, Usd("0"));
  EXPECT_EQ(quote->rule, PricingRule::kLinear);
}

TEST(LinearPriceTest, TableMutualInformation) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_per_bit.json"));
  const oracle::Table t =
      oracle::MakeTable(2, 2, {0.30, 0.10, 0.20, 0.40});
  const double mi_nats = static_cast<double>(oracle::MutualInformation(t));
  absl::StatusOr<PriceQuote> quote = PriceLinear(policy, Nats(mi_nats));
  ASSERT_TRUE(quote.ok());
  EXPECT_NEAR(quote->total.ToDouble(), 12451.125, 0.01);
}

TEST(LinearPriceTest, ScreeningExample) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_screen.json"));
  absl::StatusOr<PriceQuote> quote = PriceLinear(policy, Nats(0.036));
  ASSERT_TRUE(quote.ok());
  EXPECT_EQ(quote->total, Usd("360.001"));
  EXPECT_EQ(quote->surcharge_component, Usd("360"));
}

TEST(LinearPriceTest, Errors) {
  PricingPolicy policy = ScalarPolicy("1", 10);
  EXPECT_FALSE(PriceLinear(policy, Nats(-0.1)).ok());
  EXPECT_FALSE(PriceLinear(policy, Nats(NAN)).ok());
  PricingPolicy no_lambda;
  EXPECT_EQ(PriceLinear(no_lambda, Nats(0.1)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  PricingPolicy weighted = *LoadPolicy(DataPath("policy_weighted.json"));
  EXPECT_EQ(PriceLinear(weighted, Nats(0.1)).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(WeightedPriceTest, SumsSubsetSurcharges) {
  JointTable table = *AttachSchema(
      *LoadJointTable(DataPath("intersecting.csv")),
      *LoadSchema(DataPath("intersecting_schema.json")));
  absl::StatusOr<LeakageReport> report =
      IntersectionLeakageReport(table, InfoUnit::kBits);
  ASSERT_TRUE(report.ok()) << report.status();
  PricingPolicy policy = *LoadPolicy(DataPath("policy_weighted.json"));
  absl::StatusOr<PriceQuote> quote = PriceWeighted(policy, *report);
  ASSERT_TRUE(quote.ok()) << quote.status();

  const oracle::Table t = oracle::MakeTable(
      2, 4, {0.25, 0.05, 0.05, 0.05, 0.15, 0.05, 0.25, 0.15});
  const long double sex =
      oracle::MutualInformation(oracle::MergeColumns(t, {0, 0, 1, 1}, 2));
  const long double disability =
      oracle::MutualInformation(oracle::MergeColumns(t, {0, 1, 0, 1}, 2));
  const long double joint = oracle::MutualInformation(t);
  const double expected =
      static_cast<double>(20000 * sex + 30000 * disability + 50000 * joint);
  EXPECT_NEAR(quote->surcharge_component.ToDouble(), expected, 1e-4);
  EXPECT_EQ(quote->total,
            quote->surcharge_component + policy.production_cost);
  EXPECT_NEAR(quote->leakage.nats(), static_cast<double>(joint), 1e-12);
}

TEST(WeightedPriceTest, MissingSubsetIsAnError) {
  PricingPolicy policy;
  policy.subset_lambdas_per_nat["religion"] = 1.0;
  JointTable table = *AttachSchema(
      *LoadJointTable(DataPath("intersecting.csv")),
      *LoadSchema(DataPath("intersecting_schema.json")));
  LeakageReport report = *IntersectionLeakageReport(table, InfoUnit::kNats);
  EXPECT_THAT(PriceWeighted(policy, report).status().message(),
              HasSubstr("religion"));
  EXPECT_FALSE(PriceWeighted(ScalarPolicy("0", 1), report).ok());
}

TEST(ExposurePriceTest, SingleVariableTable) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_exposure.json"));
  JointTable table = *LoadJointTable(DataPath("single_variable.csv"));
  absl::StatusOr<PriceQuote> quote = PriceExposure(policy, table);
  ASSERT_TRUE(quote.ok()) << quote.status();
  const oracle::Table t =
      oracle::MakeTable(2, 2, {0.30, 0.10, 0.20, 0.40});
  const double ratio = static_cast<double>(oracle::MutualInformation(t) /
                                           oracle::EntropyS(t));
  EXPECT_NEAR(quote->surcharge_component.ToDouble(), ratio * 500000, 1e-4);
  EXPECT_EQ(quote->surcharge_component.ToString(), "62255.6249");
  EXPECT_EQ(quote->total.ToString(), "62255.6259");
}

TEST(ExposurePriceTest, FullDisclosureChargesTheMaximum) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_exposure.json"));
  JointTable table = *LoadJointTable(DataPath("deterministic.csv"));
  absl::StatusOr<PriceQuote> quote = PriceExposure(policy, table);
  ASSERT_TRUE(quote.ok());
  EXPECT_EQ(quote->surcharge_component, Usd("500000"));

  JointTable product = *LoadJointTable(DataPath("product.csv"));
  EXPECT_EQ(PriceExposure(policy, product)->surcharge_component, Money());
}

TEST(ExposurePriceTest, NeedsPenaltyCap) {
  JointTable table = *LoadJointTable(DataPath("single_variable.csv"));
  EXPECT_EQ(PriceExposure(ScalarPolicy("0", 1), table).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(CalibrationTest, LambdaFromPenaltyAndEntropy) {
  absl::StatusOr<double> lambda = CalibrateLambda(Usd("500000"), Nats(5.3));
  ASSERT_TRUE(lambda.ok());
  EXPECT_NEAR(*lambda, 94339.6226, 0.01);
  EXPECT_NEAR(*lambda * 0.02, 1886.79, 0.01);
  EXPECT_NEAR(*CalibrateLambda(Usd("500000"), Bits(5.3 / kLn2)), *lambda,
              1e-6);
  EXPECT_FALSE(CalibrateLambda(Usd("0"), Nats(5.3)).ok());
  EXPECT_FALSE(CalibrateLambda(Usd("1"), Nats(0)).ok());
}

TEST(ConvertLambdaTest, NatAndBitMultipliers) {
  const double per_nat = 94339.62264150943;
  const double per_bit = *ConvertLambda(per_nat, InfoUnit::kNats,
                                        InfoUnit::kBits, std::nullopt);
  EXPECT_NEAR(per_bit / per_nat, kLn2, 1e-12);
  EXPECT_NEAR(*ConvertLambda(per_bit, InfoUnit::kBits, InfoUnit::kNats,
                             std::nullopt),
              per_nat, 1e-9);
  EXPECT_NEAR(*ConvertLambda(per_nat, InfoUnit::kNats, InfoUnit::kBits, 0.9),
              0.9 * kLn2 * per_nat, 1e-9);
  EXPECT_EQ(*ConvertLambda(7.0, InfoUnit::kNats, InfoUnit::kNats,
                           std::nullopt),
            7.0);
  EXPECT_FALSE(
      ConvertLambda(1.0, InfoUnit::kNats, InfoUnit::kBits, -1.0).ok());
}

// Baseline, monotonicity and additivity over random leakage pairs.
TEST(AxiomTest, LinearRuleOverRandomPairs) {
  std::mt19937_64 rng(20260105);
  const PricingPolicy policy = ScalarPolicy("0.001", 94339.62264150943);
  EXPECT_EQ(PriceLinear(policy, Nats(0))->total, policy.production_cost);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = 5.0 * oracle::Uniform01(rng);
    const double b = 5.0 * oracle::Uniform01(rng);
    const Money va = PriceLinear(policy, Nats(a))->total;
    const Money vb = PriceLinear(policy, Nats(b))->total;
    const Money vab = PriceLinear(policy, Nats(a + b))->total;
    if (a < b) {
      EXPECT_LT(va, vb) << a << " " << b;
    } else if (b < a) {
      EXPECT_LT(vb, va) << a << " " << b;
    }
    const int64_t split = (va - policy.production_cost).minor_units() +
                          (vb - policy.production_cost).minor_units();
    const int64_t joint = (vab - policy.production_cost).minor_units();
    EXPECT_LE(std::llabs(split - joint), 1) << a << " " << b;
  }
}

TEST(CurveTest, LinearCurveHasConstantSlope) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_curve.json"));
  absl::StatusOr<std::vector<CurvePoint>> curve =
      PriceCurve(policy, PricingRule::kLinear, {0.0, 2.0, 0.25});
  ASSERT_TRUE(curve.ok()) << curve.status();
  ASSERT_EQ(curve->size(), 9u);
  EXPECT_EQ(curve->front().price, policy.production_cost);
  for (size_t i = 1; i < curve->size(); ++i) {
    const double slope = ((*curve)[i].value - (*curve)[i - 1].value) /
                         ((*curve)[i].leakage_nats -
                          (*curve)[i - 1].leakage_nats);
    EXPECT_NEAR(slope, *policy.lambda_per_nat, 1e-9);
  }
  EXPECT_EQ(CurveToCsv(*curve).substr(0, 14), "leakage,value\n");
}

TEST(CurveTest, ExposureCurveEndsAtTheCap) {
  PricingPolicy policy = *LoadPolicy(DataPath("policy_exposure.json"));
  const double h = 5.3;
  absl::StatusOr<std::vector<CurvePoint>> curve =
      PriceCurve(policy, PricingRule::kExposure, {0.0, h, 1.0}, h);
  ASSERT_TRUE(curve.ok()) << curve.status();
  EXPECT_EQ(curve->back().leakage_nats, h);
  EXPECT_EQ(curve->back().price, policy.production_cost + Usd("500000"));
  EXPECT_FALSE(PriceCurve(policy, PricingRule::kExposure, {0, 1, 0.5}).ok());
  EXPECT_FALSE(
      PriceCurve(policy, PricingRule::kExposure, {0, 6, 0.5}, h).ok());
  EXPECT_FALSE(PriceCurve(policy, PricingRule::kLinear, {1, 0, 0.5}).ok());
  EXPECT_FALSE(PriceCurve(policy, PricingRule::kLinear, {0, 1, 0}).ok());
}

}  // namespace
}  // namespace privleak
