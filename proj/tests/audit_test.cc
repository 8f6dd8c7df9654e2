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


#include "core/audit.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_replace.h"
#include "core/money.h"
#include "core/pricing.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace privleak {
namespace {

using ::testing::HasSubstr;

std::string DataPath(const std::string& name) {
  return std::string(PRIVLEAK_TEST_DATA) + "/" + name;
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PricingPolicy Calibrated() {
  return *LoadPolicy(DataPath("policy_calibrated.json"));
}

SessionOptions Fixed(const std::string& id) {
  SessionOptions options;
  options.session_id = id;
  options.opened_at = "2026-01-05T09:00:00Z";
  options.clock = [] { return std::string("2026-01-05T09:30:00Z"); };
  return options;
}

TEST(ConsentTest, Names) {
  EXPECT_EQ(ConsentName(ConsentStatus::kGranted), "granted");
  EXPECT_EQ(*ParseConsent("denied"), ConsentStatus::kDenied);
  EXPECT_FALSE(ParseConsent("maybe").ok());
}

TEST(TimestampTest, Validation) {
  EXPECT_TRUE(ValidateTimestamp("2025-07-01T10:00:00Z").ok());
  EXPECT_TRUE(ValidateTimestamp("2025-07-01T10:00:00.25+02:00").ok());
  EXPECT_FALSE(ValidateTimestamp("yesterday").ok());
  EXPECT_FALSE(ValidateTimestamp("2025-13-01T10:00:00Z").ok());
  EXPECT_FALSE(ValidateTimestamp("").ok());
}

TEST(LedgerTest, TwoSmallDisclosures) {
  absl::StatusOr<SessionLedger> ledger =
      SessionLedger::Open(Calibrated(), Fixed("s1"));
  ASSERT_TRUE(ledger.ok()) << ledger.status();
  ASSERT_TRUE(ledger->Record("fitness_app_open", Nats(0.02)).ok());
  ASSERT_TRUE(ledger->Record("screen_resolution", Nats(0.02)).ok());
  absl::StatusOr<ClosureReport> report = ledger->Close(ConsentStatus::kGranted);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_NEAR(report->total_surcharge.ToDouble(), 3773.58, 0.01);
  EXPECT_EQ(report->events.size(), 2u);
  EXPECT_EQ(report->events[0].sequence, 1);
  EXPECT_EQ(report->events[1].timestamp, "2026-01-05T09:30:00Z");
  EXPECT_EQ(report->grand_total,
            report->total_surcharge + *Money::Parse("0.001"));
  EXPECT_NEAR(report->total_leakage_nats, 0.04, 1e-15);
  EXPECT_EQ(report->decision, ConsentStatus::kGranted);
}

TEST(LedgerTest, MatchesSingleShotPricing) {
  std::mt19937_64 rng(77);
  const PricingPolicy policy = Calibrated();
  for (int trial = 0; trial < 50; ++trial) {
    SessionLedger ledger = *SessionLedger::Open(policy, Fixed("t"));
    double total = 0.0;
    const int events = 1 + trial % 9;
    for (int e = 0; e < events; ++e) {
      const double leak = 0.3 * oracle::Uniform01(rng);
      total += leak;
      ASSERT_TRUE(ledger.Record("obs", Nats(leak)).ok());
    }
    const Money once = PriceLinear(policy, Nats(total))->total;
    const Money summed = ledger.Summary().grand_total;
    EXPECT_LE(std::llabs((summed - once).minor_units()), 1);
  }
}

TEST(LedgerTest, EmptySessionChargesProductionCostOnly) {
  SessionLedger ledger = *SessionLedger::Open(Calibrated(), Fixed("e"));
  absl::StatusOr<ClosureReport> report = ledger.Close(ConsentStatus::kDenied);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->grand_total, *Money::Parse("0.001"));
  EXPECT_EQ(report->total_surcharge, Money());
}

TEST(LedgerTest, StateMachine) {
  SessionLedger ledger = *SessionLedger::Open(Calibrated(), Fixed("m"));
  EXPECT_FALSE(ledger.Record("x", Nats(-0.1)).ok());
  EXPECT_FALSE(ledger.Record("", Nats(0.1)).ok());
  EXPECT_FALSE(ledger.Record("x", Nats(0.1), "noon").ok());
  EXPECT_TRUE(ledger.events().empty());
  EXPECT_EQ(ledger.Close(ConsentStatus::kPending).status().code(),
            absl::StatusCode::kInvalidArgument);
  ASSERT_TRUE(ledger.Close(ConsentStatus::kDenied).ok());
  EXPECT_EQ(ledger.Record("x", Nats(0.1)).code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(ledger.Close(ConsentStatus::kGranted).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(ledger.consent(), ConsentStatus::kDenied);
}

TEST(LedgerTest, GeneratedIdsDiffer) {
  std::set<std::string> ids;
  for (int i = 0; i < 100; ++i) {
    ids.insert(SessionLedger::Open(Calibrated())->session_id());
  }
  EXPECT_EQ(ids.size(), 100u);
  EXPECT_FALSE(SessionLedger::Open(Calibrated(), Fixed("")).ok());
}

TEST(LedgerTest, RejectsWeightedPolicy) {
  EXPECT_FALSE(
      SessionLedger::Open(*LoadPolicy(DataPath("policy_weighted.json"))).ok());
}

TEST(LedgerTest, SerializeParseRoundTrip) {
  SessionLedger ledger = *SessionLedger::Open(Calibrated(), Fixed("rt"));
  ASSERT_TRUE(ledger.Record("a", Bits(0.5)).ok());
  ASSERT_TRUE(ledger.Record("b", Nats(1.0 / 3.0)).ok());
  absl::StatusOr<SessionLedger> open_copy =
      SessionLedger::Parse(ledger.Serialize());
  ASSERT_TRUE(open_copy.ok()) << open_copy.status();
  EXPECT_TRUE(*open_copy == ledger);
  ASSERT_TRUE(ledger.Close(ConsentStatus::kGranted).ok());
  absl::StatusOr<SessionLedger> copy = SessionLedger::Parse(ledger.Serialize());
  ASSERT_TRUE(copy.ok()) << copy.status();
  EXPECT_TRUE(*copy == ledger);
  EXPECT_EQ(copy->Serialize(), ledger.Serialize());
}

TEST(LedgerTest, TamperingIsDetected) {
  SessionLedger ledger = *SessionLedger::Open(Calibrated(), Fixed("tp"));
  ASSERT_TRUE(ledger.Record("a", Nats(0.02)).ok());
  ASSERT_TRUE(ledger.Close(ConsentStatus::kGranted).ok());
  const std::string text = ledger.Serialize();
  const std::string surcharge = ledger.events()[0].surcharge.ToString();

  const std::string edited = absl::StrReplaceAll(
      text, {{"\"surcharge\":\"" + surcharge + "\"",
              "\"surcharge\":\"1.0000\""}});
  ASSERT_NE(edited, text);
  EXPECT_EQ(SessionLedger::Parse(edited).status().code(),
            absl::StatusCode::kDataLoss);

  const std::string extra = text + text.substr(text.find('\n') + 1);
  EXPECT_EQ(SessionLedger::Parse(extra).status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_EQ(SessionLedger::Parse("").status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_EQ(SessionLedger::Parse("not json\n").status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(LedgerTest, JournalMirrorsSerialization) {
  const std::string path =
      (std::filesystem::path(::testing::TempDir()) / "journal.jsonl").string();
  std::remove(path.c_str());
  SessionOptions options = Fixed("jr");
  options.journal_path = path;
  SessionLedger ledger = *SessionLedger::Open(Calibrated(), options);
  ASSERT_TRUE(ledger.Record("a", Nats(0.02)).ok());
  ASSERT_TRUE(ledger.Close(ConsentStatus::kGranted).ok());
  EXPECT_EQ(ReadAll(path), ledger.Serialize());
  absl::StatusOr<SessionLedger> read = SessionLedger::Read(path);
  ASSERT_TRUE(read.ok()) << read.status();
  EXPECT_TRUE(*read == ledger);

  SessionOptions bad = Fixed("jr2");
  bad.journal_path = "/nonexistent-dir/journal.jsonl";
  EXPECT_FALSE(SessionLedger::Open(Calibrated(), bad).ok());
}

TEST(ReplayTest, StreamIsDeterministic) {
  const std::string stream = ReadAll(DataPath("two_events.jsonl"));
  SessionOptions options;
  options.clock = [] { return std::string("1970-01-01T00:00:00Z"); };
  absl::StatusOr<SessionLedger> a =
      ReplayEventStream(Calibrated(), stream, options);
  absl::StatusOr<SessionLedger> b =
      ReplayEventStream(Calibrated(), stream, options);
  ASSERT_TRUE(a.ok()) << a.status();
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(a->Serialize(), b->Serialize());
  EXPECT_EQ(a->session_id(), "sess-two");
  EXPECT_EQ(a->consent(), ConsentStatus::kGranted);
  EXPECT_EQ(a->Summary().grand_total.ToString(), "3773.5859");
}

TEST(ReplayTest, Errors) {
  const PricingPolicy policy = Calibrated();
  absl::StatusOr<SessionLedger> after =
      ReplayEventStream(policy, ReadAll(DataPath("after_closure.jsonl")));
  EXPECT_EQ(after.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(ReplayEventStream(policy, "{\"observable\": \"a\"}\n").ok());
  EXPECT_FALSE(ReplayEventStream(policy, "{{\n").ok());
  EXPECT_FALSE(
      ReplayEventStream(policy,
                        "{\"observable\": \"a\", \"leakage\": 1, "
                        "\"unit\": \"furlongs\"}\n")
          .ok());
}

TEST(ReplayTest, DeniedStreamInBits) {
  absl::StatusOr<SessionLedger> ledger =
      ReplayEventStream(Calibrated(), ReadAll(DataPath("denied.jsonl")));
  ASSERT_TRUE(ledger.ok()) << ledger.status();
  EXPECT_EQ(ledger->consent(), ConsentStatus::kDenied);
  EXPECT_NEAR(ledger->total_leakage_nats(), 0.5 * std::numbers::ln2, 1e-15);
}

TEST(ReportTest, TextAndJson) {
  SessionLedger ledger = *SessionLedger::Open(Calibrated(), Fixed("rep"));
  ASSERT_TRUE(ledger.Record("fitness_app_open", Nats(0.02)).ok());
  const ClosureReport report = *ledger.Close(ConsentStatus::kGranted);
  const std::string text = report.ToText();
  EXPECT_THAT(text, HasSubstr("Session rep"));
  EXPECT_THAT(text, HasSubstr("fitness_app_open"));
  EXPECT_THAT(text, HasSubstr("Decision: granted"));
  EXPECT_THAT(text, HasSubstr(std::string(kIndependenceDisclaimer)));
  EXPECT_THAT(text, HasSubstr("Grand total: " +
                              report.grand_total.ToString() + " USD"));
  const std::string json = report.ToJson();
  EXPECT_THAT(json, HasSubstr("\"decision\": \"granted\""));
  EXPECT_THAT(json, HasSubstr("disclaimer"));
}

}  // namespace
}  // namespace privleak
