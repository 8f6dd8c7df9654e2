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


// Exercises the shared library through its public C header only.

#include "privleak/privleak.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace {

using ::testing::HasSubstr;

std::string DataPath(const std::string& name) {
  return std::string(PRIVLEAK_TEST_DATA) + "/" + name;
}

// Takes ownership of a library-allocated string.
std::string Take(char* s) {
  std::string out = s == nullptr ? "" : s;
  privleak_string_free(s);
  return out;
}

constexpr const char* kSchemaJson = R"({
  "attributes": [
    {"name": "s", "kind": "continuous", "range": [-50, 50]}
  ],
  "observable": {"name": "x", "kind": "continuous", "range": [-50, 50]}
})";

TEST(CapiTest, VersionAndErrors) {
  EXPECT_STRNE(privleak_version(), "");
  privleak_table* table = nullptr;
  EXPECT_EQ(privleak_table_load(DataPath("missing.csv").c_str(), &table),
            PRIVLEAK_ERROR_IO);
  EXPECT_EQ(table, nullptr);
  EXPECT_THAT(privleak_last_error(), HasSubstr("missing.csv"));
  EXPECT_EQ(privleak_table_load(DataPath("not_a_number.csv").c_str(), &table),
            PRIVLEAK_ERROR_PARSE);
  EXPECT_EQ(privleak_table_load(DataPath("bad_rowsum.csv").c_str(), &table),
            PRIVLEAK_ERROR_VALIDATION);
  EXPECT_THAT(privleak_last_error(), HasSubstr("deviating from 1"));
  EXPECT_EQ(privleak_table_load(nullptr, &table), PRIVLEAK_ERROR_VALIDATION);
}

TEST(CapiTest, Money) {
  char buf[32];
  EXPECT_EQ(privleak_money_format(136000000, buf, sizeof buf), 10u);
  EXPECT_STREQ(buf, "13600.0000");
  char tiny[4];
  EXPECT_EQ(privleak_money_format(136000000, tiny, sizeof tiny), 10u);
  int64_t minor = 0;
  ASSERT_EQ(privleak_money_parse("0.001", &minor), PRIVLEAK_OK);
  EXPECT_EQ(minor, 10);
  EXPECT_EQ(privleak_money_parse("0.00001", &minor),
            PRIVLEAK_ERROR_VALIDATION);
}

TEST(CapiTest, TableMeasures) {
  const double p[] = {0.30, 0.10, 0.20, 0.40};
  const char* xs[] = {"morning", "evening"};
  const char* ss[] = {"male", "female"};
  privleak_table* table = nullptr;
  ASSERT_EQ(privleak_table_create(2, 2, p, xs, ss, &table), PRIVLEAK_OK);
  privleak_entropies h;
  ASSERT_EQ(privleak_table_entropies(table, PRIVLEAK_BITS, &h), PRIVLEAK_OK);
  EXPECT_NEAR(h.h_s, 1.0, 1e-15);
  EXPECT_NEAR(h.h_s_given_x, 0.8754887502163468, 1e-12);
  double mi = 0.0;
  int clamped = -1;
  ASSERT_EQ(privleak_mutual_information(table, PRIVLEAK_BITS, &mi, &clamped),
            PRIVLEAK_OK);
  EXPECT_NEAR(mi, 0.12451124978365313, 1e-12);
  EXPECT_EQ(clamped, 0);
  double ratio = 0.0;
  ASSERT_EQ(privleak_exposure_ratio(table, &ratio), PRIVLEAK_OK);
  EXPECT_NEAR(ratio, mi, 1e-12);
  EXPECT_NEAR(privleak_convert_units(mi, PRIVLEAK_BITS, PRIVLEAK_NATS),
              mi * std::numbers::ln2, 1e-15);
  privleak_table_free(table);

  const double uniform[] = {0.25, 0.25, 0.25, 0.25};
  double hu = 0.0;
  ASSERT_EQ(privleak_entropy(uniform, 4, PRIVLEAK_BITS, &hu), PRIVLEAK_OK);
  EXPECT_DOUBLE_EQ(hu, 2.0);
  const double bad[] = {0.5, 0.6};
  EXPECT_EQ(privleak_entropy(bad, 2, PRIVLEAK_BITS, &hu),
            PRIVLEAK_ERROR_VALIDATION);
}

TEST(CapiTest, RenormalizationWarning) {
  const double p[] = {0.3, 0.1, 0.2, 0.4 + 5e-8};
  const char* xs[] = {"a", "b"};
  const char* ss[] = {"c", "d"};
  privleak_table* table = nullptr;
  ASSERT_EQ(privleak_table_create(2, 2, p, xs, ss, &table), PRIVLEAK_OK);
  EXPECT_EQ(privleak_table_warning_count(table), 1u);
  EXPECT_THAT(privleak_table_warning(table, 0), HasSubstr("renormal"));
  EXPECT_EQ(privleak_table_warning(table, 5), nullptr);
  privleak_table_free(table);
}

TEST(CapiTest, IntersectionReportAndWeightedPrice) {
  privleak_table* table = nullptr;
  privleak_schema* schema = nullptr;
  privleak_policy* policy = nullptr;
  ASSERT_EQ(privleak_table_load(DataPath("intersecting.csv").c_str(), &table),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_schema_load(
                DataPath("intersecting_schema.json").c_str(), &schema),
            PRIVLEAK_OK);
  EXPECT_EQ(privleak_schema_attribute_count(schema), 2u);
  char* labels = nullptr;
  ASSERT_EQ(privleak_schema_intersection_labels(schema, &labels), PRIVLEAK_OK);
  EXPECT_EQ(Take(labels),
            "male|abled\nmale|disabled\nfemale|abled\nfemale|disabled");

  privleak_quote quote;
  ASSERT_EQ(privleak_policy_load(DataPath("policy_weighted.json").c_str(),
                                 &policy),
            PRIVLEAK_OK);
  EXPECT_EQ(privleak_price_weighted(policy, table, &quote),
            PRIVLEAK_ERROR_DOMAIN);
  ASSERT_EQ(privleak_table_attach_schema(table, schema), PRIVLEAK_OK);

  double sex = 0, disability = 0, joint = 0;
  ASSERT_EQ(privleak_marginal_mi(table, "sex", PRIVLEAK_NATS, &sex),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_marginal_mi(table, "disability", PRIVLEAK_NATS,
                                 &disability),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_marginal_mi(table, "sex+disability", PRIVLEAK_NATS,
                                 &joint),
            PRIVLEAK_OK);
  EXPECT_GT(joint, sex);
  EXPECT_GT(joint, disability);
  EXPECT_NE(privleak_marginal_mi(table, "age", PRIVLEAK_NATS, &sex),
            PRIVLEAK_OK);

  char* report = nullptr;
  ASSERT_EQ(privleak_leakage_report_json(table, PRIVLEAK_BITS, &report),
            PRIVLEAK_OK);
  const std::string json = Take(report);
  EXPECT_THAT(json, HasSubstr("\"unit\":\"bits\""));
  EXPECT_THAT(json, HasSubstr("\"subset\":\"sex+disability\""));

  ASSERT_EQ(privleak_price_weighted(policy, table, &quote), PRIVLEAK_OK);
  const double expected = 20000 * sex + 30000 * disability + 50000 * joint;
  EXPECT_NEAR(static_cast<double>(quote.surcharge) / PRIVLEAK_MONEY_SCALE,
              expected, 1e-4);
  EXPECT_EQ(quote.total, quote.surcharge + quote.production);
  EXPECT_EQ(quote.rule, PRIVLEAK_RULE_WEIGHTED);

  privleak_policy_free(policy);
  privleak_schema_free(schema);
  privleak_table_free(table);
}

TEST(CapiTest, PricingRules) {
  privleak_policy* policy = nullptr;
  ASSERT_EQ(privleak_policy_load(DataPath("policy_per_bit.json").c_str(),
                                 &policy),
            PRIVLEAK_OK);
  privleak_quote quote;
  ASSERT_EQ(privleak_price_linear(policy, 0.136, PRIVLEAK_BITS, &quote),
            PRIVLEAK_OK);
  EXPECT_EQ(quote.total, 136000000);
  EXPECT_EQ(privleak_price_linear(policy, -1, PRIVLEAK_BITS, &quote),
            PRIVLEAK_ERROR_VALIDATION);
  char currency[8];
  EXPECT_EQ(privleak_policy_currency(policy, currency, sizeof currency), 3u);
  EXPECT_STREQ(currency, "USD");

  privleak_table* table = nullptr;
  ASSERT_EQ(privleak_table_load(DataPath("single_variable.csv").c_str(),
                                &table),
            PRIVLEAK_OK);
  EXPECT_EQ(privleak_price_exposure(policy, table, &quote),
            PRIVLEAK_ERROR_DOMAIN);
  ASSERT_EQ(privleak_policy_set_pi_max(policy, 500000LL * 10000),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_price_exposure(policy, table, &quote), PRIVLEAK_OK);
  char buf[32];
  privleak_money_format(quote.total, buf, sizeof buf);
  EXPECT_STREQ(buf, "62255.6249");

  ASSERT_EQ(privleak_policy_set_lambda(policy, 1.0, PRIVLEAK_NATS),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_price_linear(policy, 2.0, PRIVLEAK_NATS, &quote),
            PRIVLEAK_OK);
  EXPECT_EQ(quote.surcharge, 20000);

  char* csv = nullptr;
  ASSERT_EQ(privleak_price_curve_csv(policy, PRIVLEAK_RULE_LINEAR, 0, 1, 0.5,
                                     0, &csv),
            PRIVLEAK_OK);
  EXPECT_THAT(Take(csv), HasSubstr("leakage,value\n"));

  char* json = nullptr;
  ASSERT_EQ(privleak_policy_to_json(policy, &json), PRIVLEAK_OK);
  privleak_policy* copy = nullptr;
  ASSERT_EQ(privleak_policy_parse(Take(json).c_str(), &copy), PRIVLEAK_OK);
  privleak_policy_free(copy);
  privleak_table_free(table);
  privleak_policy_free(policy);
  EXPECT_EQ(privleak_policy_parse("{", &copy), PRIVLEAK_ERROR_PARSE);
}

TEST(CapiTest, Calibration) {
  double lambda = 0.0;
  ASSERT_EQ(privleak_calibrate_lambda(500000LL * 10000, 5.3, PRIVLEAK_NATS,
                                      &lambda),
            PRIVLEAK_OK);
  EXPECT_NEAR(lambda, 94339.6226, 0.01);
  double per_bit = 0.0;
  ASSERT_EQ(privleak_convert_lambda(lambda, PRIVLEAK_NATS, PRIVLEAK_BITS,
                                    nullptr, &per_bit),
            PRIVLEAK_OK);
  EXPECT_NEAR(per_bit / lambda, std::numbers::ln2, 1e-12);
  const double rate = 0.9;
  double converted = 0.0;
  ASSERT_EQ(privleak_convert_lambda(lambda, PRIVLEAK_NATS, PRIVLEAK_BITS,
                                    &rate, &converted),
            PRIVLEAK_OK);
  EXPECT_NEAR(converted, 0.9 * per_bit, 1e-9);
  EXPECT_EQ(privleak_calibrate_lambda(0, 5.3, PRIVLEAK_NATS, &lambda),
            PRIVLEAK_ERROR_VALIDATION);
}

TEST(CapiTest, EstimateFromSamples) {
  privleak_schema* schema = nullptr;
  ASSERT_EQ(privleak_schema_parse(kSchemaJson, &schema), PRIVLEAK_OK);
  std::string csv = "s,x\n";
  for (int i = 0; i < 200; ++i) {
    const double s = std::sin(i * 0.7) * 3.0;
    const double x = s + std::cos(i * 1.3);
    csv += std::to_string(s) + "," + std::to_string(x) + "\n";
  }
  privleak_samples* samples = nullptr;
  ASSERT_EQ(privleak_samples_parse(schema, csv.c_str(), &samples),
            PRIVLEAK_OK);
  EXPECT_EQ(privleak_samples_count(samples), 200u);
  EXPECT_EQ(privleak_samples_all_categorical(samples), 0);

  privleak_estimate_options options;
  privleak_estimate_options_init(&options);
  options.seed = 5;
  privleak_estimate_result result;
  char* report = nullptr;
  ASSERT_EQ(privleak_estimate(samples, &options, &result, &report),
            PRIVLEAK_OK);
  EXPECT_EQ(result.method, PRIVLEAK_METHOD_KDE);
  EXPECT_EQ(result.n, 200u);
  EXPECT_GT(result.value_nats, 0.3);
  EXPECT_EQ(result.has_seed, 1);
  const std::string json = Take(report);
  EXPECT_THAT(json, HasSubstr("\"bandwidths\""));
  EXPECT_THAT(json, HasSubstr("\"method\":\"kde-monte-carlo\""));

  privleak_samples* binned = nullptr;
  char* cuts = nullptr;
  ASSERT_EQ(privleak_samples_discretize(samples, "s=quantile:2;x=equal:3",
                                        &binned, &cuts),
            PRIVLEAK_OK);
  EXPECT_THAT(Take(cuts), HasSubstr("\"x\""));
  EXPECT_EQ(privleak_samples_all_categorical(binned), 1);
  privleak_estimate_options_init(&options);
  ASSERT_EQ(privleak_estimate(binned, &options, &result, nullptr),
            PRIVLEAK_OK);
  EXPECT_EQ(result.method, PRIVLEAK_METHOD_PLUGIN);
  EXPECT_EQ(result.has_seed, 0);

  privleak_table* table = nullptr;
  ASSERT_EQ(privleak_table_from_samples(binned, &table), PRIVLEAK_OK);
  double mi = 0.0;
  ASSERT_EQ(privleak_mutual_information(table, PRIVLEAK_NATS, &mi, nullptr),
            PRIVLEAK_OK);
  EXPECT_NEAR(mi, result.value_nats, 1e-12);
  privleak_table_free(table);

  double h = 0.0;
  const double one[] = {1.0};
  EXPECT_EQ(privleak_silverman_bandwidth(one, 1, &h),
            PRIVLEAK_ERROR_VALIDATION);

  privleak_samples_free(binned);
  privleak_samples_free(samples);
  privleak_schema_free(schema);
}

TEST(CapiTest, LedgerLifecycle) {
  privleak_policy* policy = nullptr;
  ASSERT_EQ(privleak_policy_load(DataPath("policy_calibrated.json").c_str(),
                                 &policy),
            PRIVLEAK_OK);
  privleak_ledger* ledger = nullptr;
  ASSERT_EQ(privleak_ledger_open(policy, "capi", "2026-01-05T09:00:00Z",
                                 nullptr, &ledger),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_ledger_record(ledger, "a", 0.02, PRIVLEAK_NATS,
                                   "2026-01-05T09:01:00Z"),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_ledger_record(ledger, "b", 0.02, PRIVLEAK_NATS,
                                   "2026-01-05T09:02:00Z"),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_ledger_close(ledger, PRIVLEAK_CONSENT_GRANTED,
                                  "2026-01-05T09:03:00Z"),
            PRIVLEAK_OK);
  EXPECT_EQ(privleak_ledger_record(ledger, "c", 0.02, PRIVLEAK_NATS,
                                   "2026-01-05T09:04:00Z"),
            PRIVLEAK_ERROR_DOMAIN);
  privleak_ledger_totals totals;
  ASSERT_EQ(privleak_ledger_totals_get(ledger, &totals), PRIVLEAK_OK);
  EXPECT_EQ(totals.events, 2u);
  EXPECT_EQ(totals.grand_total, 37735859);
  EXPECT_EQ(totals.consent, PRIVLEAK_CONSENT_GRANTED);

  const std::string path =
      (std::filesystem::path(::testing::TempDir()) / "capi_ledger.jsonl")
          .string();
  ASSERT_EQ(privleak_ledger_write(ledger, path.c_str()), PRIVLEAK_OK);
  privleak_ledger* loaded = nullptr;
  ASSERT_EQ(privleak_ledger_load(path.c_str(), &loaded), PRIVLEAK_OK);
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(privleak_ledger_report(ledger, PRIVLEAK_FORMAT_MACHINE, &a),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_ledger_report(loaded, PRIVLEAK_FORMAT_MACHINE, &b),
            PRIVLEAK_OK);
  EXPECT_EQ(Take(a), Take(b));
  ASSERT_EQ(privleak_ledger_report(loaded, PRIVLEAK_FORMAT_TEXT, &a),
            PRIVLEAK_OK);
  EXPECT_THAT(Take(a), HasSubstr("Grand total: 3773.5859 USD"));
  privleak_ledger_free(loaded);
  privleak_ledger_free(ledger);

  privleak_ledger* replayed = nullptr;
  ASSERT_EQ(privleak_audit_stream(policy, DataPath("two_events.jsonl").c_str(),
                                  nullptr, "1970-01-01T00:00:00Z", nullptr,
                                  &replayed),
            PRIVLEAK_OK);
  ASSERT_EQ(privleak_ledger_totals_get(replayed, &totals), PRIVLEAK_OK);
  EXPECT_EQ(totals.grand_total, 37735859);
  privleak_ledger_free(replayed);
  EXPECT_EQ(privleak_audit_stream(policy,
                                  DataPath("after_closure.jsonl").c_str(),
                                  nullptr, nullptr, nullptr, &replayed),
            PRIVLEAK_ERROR_DOMAIN);
  EXPECT_EQ(privleak_audit_stream(policy, DataPath("two_events.jsonl").c_str(),
                                  nullptr, "not a time", nullptr, &replayed),
            PRIVLEAK_ERROR_VALIDATION);
  privleak_policy_free(policy);
}

}  // namespace
