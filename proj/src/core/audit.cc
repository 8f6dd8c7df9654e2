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

#include <atomic>
#include <fstream>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/time/clock.h"
#include "absl/time/time.h"
#include "core/csv.h"
#include "core/status_macros.h"
#include "json.hpp"

namespace privleak {
namespace {

using ::nlohmann::ordered_json;

std::string UtcNow() {
  return absl::FormatTime("%Y-%m-%dT%H:%M:%SZ", absl::Now(),
                          absl::UTCTimeZone());
}

std::string GenerateSessionId() {
  static std::atomic<uint64_t> counter{0};
  std::random_device device;
  const uint64_t entropy =
      (static_cast<uint64_t>(device()) << 32) ^ device() ^
      static_cast<uint64_t>(absl::ToUnixNanos(absl::Now()));
  return absl::StrFormat("sess-%016x-%d", entropy, counter.fetch_add(1) + 1);
}

ordered_json EventToJson(const AuditEvent& event) {
  ordered_json line = ordered_json::object();
  line["sequence"] = event.sequence;
  line["timestamp"] = event.timestamp;
  line["observable"] = event.observable;
  line["leakage_nats"] = event.leakage_nats;
  line["surcharge"] = event.surcharge.ToString();
  line["rule"] = event.rule;
  return line;
}

ordered_json ClosureToJson(const SessionLedger& ledger) {
  const ClosureReport report = ledger.Summary();
  ordered_json line = ordered_json::object();
  line["closure"] = ConsentName(ledger.consent());
  line["timestamp"] = ledger.closed_at().value_or("");
  line["events"] = ledger.events().size();
  line["total_leakage_nats"] = report.total_leakage_nats;
  line["total_surcharge"] = report.total_surcharge.ToString();
  line["c_p"] = report.production_cost.ToString();
  line["grand_total"] = report.grand_total.ToString();
  return line;
}

absl::StatusOr<ordered_json> ParseLine(absl::string_view line, size_t number) {
  ordered_json record = ordered_json::parse(line.begin(), line.end(), nullptr,
                                            /*allow_exceptions=*/false);
  if (record.is_discarded() || !record.is_object()) {
    return absl::DataLossError(
        absl::StrCat("line ", number, " is not a JSON object"));
  }
  return record;
}

absl::StatusOr<std::string> StringField(const ordered_json& record,
                                        absl::string_view key, size_t line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    return absl::DataLossError(
        absl::StrCat("line ", line, ": missing string field '", key, "'"));
  }
  return it->get<std::string>();
}

}  // namespace

absl::string_view ConsentName(ConsentStatus status) {
  switch (status) {
    case ConsentStatus::kPending:
      return "pending";
    case ConsentStatus::kGranted:
      return "granted";
    case ConsentStatus::kDenied:
      return "denied";
  }
  return "unknown";
}

absl::StatusOr<ConsentStatus> ParseConsent(absl::string_view name) {
  if (name == "pending") return ConsentStatus::kPending;
  if (name == "granted") return ConsentStatus::kGranted;
  if (name == "denied") return ConsentStatus::kDenied;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown consent decision '", name, "' (expected granted or denied)"));
}

absl::Status ValidateTimestamp(absl::string_view timestamp) {
  absl::Time parsed;
  std::string error;
  if (!absl::ParseTime(absl::RFC3339_full, timestamp, &parsed, &error)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "timestamp '", timestamp, "' is not ISO-8601/RFC 3339: ", error));
  }
  return absl::OkStatus();
}

absl::StatusOr<SessionLedger> SessionLedger::Open(PricingPolicy policy,
                                                  SessionOptions options) {
  PRIVLEAK_RETURN_IF_ERROR(policy.Validate());
  if (!policy.lambda_per_nat.has_value()) {
    return absl::InvalidArgumentError(
        "session ledgers price events linearly and need a scalar lambda");
  }
  SessionLedger ledger;
  ledger.policy_ = std::move(policy);
  ledger.clock_ = options.clock ? std::move(options.clock) : UtcNow;
  ledger.session_id_ = options.session_id.has_value() ? *options.session_id
                                                      : GenerateSessionId();
  if (ledger.session_id_.empty()) {
    return absl::InvalidArgumentError("session id is empty");
  }
  ledger.opened_at_ =
      options.opened_at.has_value() ? *options.opened_at : ledger.Now();
  PRIVLEAK_RETURN_IF_ERROR(ValidateTimestamp(ledger.opened_at_));
  ledger.journal_path_ = std::move(options.journal_path);
  if (ledger.journal_path_.has_value()) {
    // Start a fresh journal with the header record.
    PRIVLEAK_RETURN_IF_ERROR(WriteFile(*ledger.journal_path_, ""));
    const std::string serialized = ledger.Serialize();
    PRIVLEAK_RETURN_IF_ERROR(
        ledger.Journal(serialized.substr(0, serialized.size() - 1)));
  }
  return ledger;
}

std::string SessionLedger::Now() const { return clock_ ? clock_() : UtcNow(); }

absl::Status SessionLedger::Journal(const std::string& line) const {
  if (!journal_path_.has_value()) return absl::OkStatus();
  std::ofstream out(*journal_path_, std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot append to ledger '", *journal_path_, "'"));
  }
  return absl::OkStatus();
}

absl::Status SessionLedger::Record(std::string observable,
                                   InfoQuantity leakage,
                                   std::optional<std::string> timestamp) {
  if (consent_ != ConsentStatus::kPending) {
    return absl::FailedPreconditionError(absl::StrCat(
        "session ", session_id_, " is closed (", ConsentName(consent_), ")"));
  }
  if (observable.empty()) {
    return absl::InvalidArgumentError("observable name is empty");
  }
  PRIVLEAK_RETURN_IF_ERROR(PriceLinear(policy_, leakage).status());
  // Each event is charged the rounded cumulative surcharge minus what is
  // already billed, so rounding never accumulates across events.
  PRIVLEAK_ASSIGN_OR_RETURN(
      PriceQuote cumulative,
      PriceLinear(policy_, Nats(total_leakage_nats_ + leakage.nats())));
  AuditEvent event;
  event.sequence = static_cast<int64_t>(events_.size()) + 1;
  event.timestamp = timestamp.has_value() ? *std::move(timestamp) : Now();
  PRIVLEAK_RETURN_IF_ERROR(ValidateTimestamp(event.timestamp));
  event.observable = std::move(observable);
  event.leakage_nats = leakage.nats();
  event.surcharge = cumulative.surcharge_component - total_surcharge_;
  event.rule = std::string(RuleName(PricingRule::kLinear));
  PRIVLEAK_RETURN_IF_ERROR(Journal(EventToJson(event).dump()));
  total_leakage_nats_ += event.leakage_nats;
  total_surcharge_ += event.surcharge;
  events_.push_back(std::move(event));
  return absl::OkStatus();
}

absl::StatusOr<ClosureReport> SessionLedger::Close(
    ConsentStatus decision, std::optional<std::string> timestamp) {
  if (consent_ != ConsentStatus::kPending) {
    return absl::FailedPreconditionError(absl::StrCat(
        "session ", session_id_, " was already closed (",
        ConsentName(consent_), ")"));
  }
  if (decision == ConsentStatus::kPending) {
    return absl::InvalidArgumentError(
        "a session closes with granted or denied");
  }
  std::string closed_at = timestamp.has_value() ? *std::move(timestamp) : Now();
  PRIVLEAK_RETURN_IF_ERROR(ValidateTimestamp(closed_at));
  consent_ = decision;
  closed_at_ = std::move(closed_at);
  PRIVLEAK_RETURN_IF_ERROR(Journal(ClosureToJson(*this).dump()));
  return Summary();
}

ClosureReport SessionLedger::Summary() const {
  ClosureReport report;
  report.session_id = session_id_;
  report.currency = policy_.currency;
  report.decision = consent_;
  report.events = events_;
  report.total_leakage_nats = total_leakage_nats_;
  report.total_leakage_bits = Nats(total_leakage_nats_).bits();
  report.total_surcharge = total_surcharge_;
  report.production_cost = policy_.production_cost;
  report.grand_total = policy_.production_cost + total_surcharge_;
  return report;
}

std::string SessionLedger::Serialize() const {
  ordered_json header = ordered_json::object();
  header["session"] = session_id_;
  header["opened"] = opened_at_;
  header["policy"] = ordered_json::parse(PolicyToJson(policy_));
  std::string out = header.dump() + "\n";
  for (const AuditEvent& event : events_) {
    out += EventToJson(event).dump() + "\n";
  }
  if (consent_ != ConsentStatus::kPending) {
    out += ClosureToJson(*this).dump() + "\n";
  }
  return out;
}

absl::Status SessionLedger::WriteTo(const std::string& path) const {
  return WriteFile(path, Serialize());
}

absl::StatusOr<SessionLedger> SessionLedger::Parse(absl::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipWhitespace());
  if (lines.empty()) {
    return absl::DataLossError("ledger file is empty");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(ordered_json header, ParseLine(lines[0], 1));
  PRIVLEAK_ASSIGN_OR_RETURN(std::string session,
                            StringField(header, "session", 1));
  PRIVLEAK_ASSIGN_OR_RETURN(std::string opened,
                            StringField(header, "opened", 1));
  if (!header.contains("policy") || !header["policy"].is_object()) {
    return absl::DataLossError("line 1: missing policy snapshot");
  }
  PRIVLEAK_ASSIGN_OR_RETURN(PricingPolicy policy,
                            ParsePolicyJson(header["policy"].dump()));
  SessionOptions options;
  options.session_id = session;
  options.opened_at = opened;
  PRIVLEAK_ASSIGN_OR_RETURN(SessionLedger ledger,
                            Open(std::move(policy), std::move(options)));

  for (size_t i = 1; i < lines.size(); ++i) {
    const size_t number = i + 1;
    PRIVLEAK_ASSIGN_OR_RETURN(ordered_json record, ParseLine(lines[i], number));
    if (ledger.consent_ != ConsentStatus::kPending) {
      return absl::DataLossError(
          absl::StrCat("line ", number, ": record after the closure record"));
    }
    if (record.contains("closure")) {
      PRIVLEAK_ASSIGN_OR_RETURN(std::string decision,
                                StringField(record, "closure", number));
      PRIVLEAK_ASSIGN_OR_RETURN(ConsentStatus status, ParseConsent(decision));
      PRIVLEAK_ASSIGN_OR_RETURN(std::string ts,
                                StringField(record, "timestamp", number));
      PRIVLEAK_RETURN_IF_ERROR(ledger.Close(status, ts).status());
      ordered_json replayed = ClosureToJson(ledger);
      if (replayed != record) {
        return absl::DataLossError(absl::StrCat(
            "line ", number, ": closure totals do not match the events"));
      }
      continue;
    }
    auto seq = record.find("sequence");
    auto leak = record.find("leakage_nats");
    if (seq == record.end() || !seq->is_number_integer() ||
        leak == record.end() || !leak->is_number()) {
      return absl::DataLossError(
          absl::StrCat("line ", number, ": malformed event record"));
    }
    const int64_t expected = static_cast<int64_t>(ledger.events_.size()) + 1;
    if (seq->get<int64_t>() != expected) {
      return absl::DataLossError(absl::StrCat(
          "line ", number, ": sequence ", seq->get<int64_t>(),
          " out of order"));
    }
    PRIVLEAK_ASSIGN_OR_RETURN(std::string ts,
                              StringField(record, "timestamp", number));
    PRIVLEAK_ASSIGN_OR_RETURN(std::string observable,
                              StringField(record, "observable", number));
    PRIVLEAK_RETURN_IF_ERROR(ledger.Record(
        std::move(observable), Nats(leak->get<double>()), std::move(ts)));
    if (EventToJson(ledger.events_.back()) != record) {
      return absl::DataLossError(absl::StrCat(
          "line ", number, ": event does not match its recomputed surcharge"));
    }
  }
  return ledger;
}

absl::StatusOr<SessionLedger> SessionLedger::Read(const std::string& path) {
  PRIVLEAK_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return Parse(text);
}

bool operator==(const SessionLedger& a, const SessionLedger& b) {
  return a.session_id_ == b.session_id_ && a.opened_at_ == b.opened_at_ &&
         a.closed_at_ == b.closed_at_ && a.policy_ == b.policy_ &&
         a.events_ == b.events_ &&
         a.total_leakage_nats_ == b.total_leakage_nats_ &&
         a.total_surcharge_ == b.total_surcharge_ && a.consent_ == b.consent_;
}

absl::StatusOr<SessionLedger> ReplayEventStream(const PricingPolicy& policy,
                                                absl::string_view stream,
                                                SessionOptions options) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(stream, '\n', absl::SkipWhitespace());
  size_t first = 0;
  if (!lines.empty()) {
    PRIVLEAK_ASSIGN_OR_RETURN(ordered_json record, ParseLine(lines[0], 1));
    if (record.contains("session")) {
      PRIVLEAK_ASSIGN_OR_RETURN(std::string id,
                                StringField(record, "session", 1));
      options.session_id = id;
      if (record.contains("timestamp")) {
        PRIVLEAK_ASSIGN_OR_RETURN(std::string ts,
                                  StringField(record, "timestamp", 1));
        options.opened_at = ts;
      }
      first = 1;
    }
  }
  PRIVLEAK_ASSIGN_OR_RETURN(SessionLedger ledger,
                            SessionLedger::Open(policy, std::move(options)));
  for (size_t i = first; i < lines.size(); ++i) {
    const size_t number = i + 1;
    PRIVLEAK_ASSIGN_OR_RETURN(ordered_json record, ParseLine(lines[i], number));
    if (ledger.consent() != ConsentStatus::kPending) {
      return absl::FailedPreconditionError(absl::StrCat(
          "line ", number, ": record after the consent decision"));
    }
    std::optional<std::string> ts;
    if (record.contains("timestamp")) {
      PRIVLEAK_ASSIGN_OR_RETURN(std::string t,
                                StringField(record, "timestamp", number));
      ts = std::move(t);
    }
    if (record.contains("decision")) {
      PRIVLEAK_ASSIGN_OR_RETURN(std::string decision,
                                StringField(record, "decision", number));
      PRIVLEAK_ASSIGN_OR_RETURN(ConsentStatus status, ParseConsent(decision));
      absl::StatusOr<ClosureReport> closed = ledger.Close(status, ts);
      if (!closed.ok()) {
        return absl::Status(closed.status().code(),
                            absl::StrCat("line ", number, ": ",
                                         closed.status().message()));
      }
      continue;
    }
    if (record.contains("session")) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", number, ": session header must be the first line"));
    }
    PRIVLEAK_ASSIGN_OR_RETURN(std::string observable,
                              StringField(record, "observable", number));
    auto leak = record.find("leakage");
    if (leak == record.end() || !leak->is_number()) {
      return absl::DataLossError(
          absl::StrCat("line ", number, ": missing numeric 'leakage'"));
    }
    InfoUnit unit = InfoUnit::kNats;
    if (record.contains("unit")) {
      PRIVLEAK_ASSIGN_OR_RETURN(std::string u,
                                StringField(record, "unit", number));
      PRIVLEAK_ASSIGN_OR_RETURN(unit, ParseInfoUnit(u));
    }
    absl::Status recorded = ledger.Record(
        std::move(observable), InfoQuantity{leak->get<double>(), unit}, ts);
    if (!recorded.ok()) {
      return absl::Status(recorded.code(), absl::StrCat("line ", number, ": ",
                                                        recorded.message()));
    }
  }
  return ledger;
}

std::string ClosureReport::ToText() const {
  std::string out;
  absl::StrAppend(&out, "Session ", session_id, "\n");
  absl::StrAppend(&out, absl::StrFormat("%-4s %-22s %-24s %14s %14s %16s\n",
                                        "#", "timestamp", "observable",
                                        "leakage_nats", "leakage_bits",
                                        "surcharge"));
  for (const AuditEvent& e : events) {
    absl::StrAppend(
        &out, absl::StrFormat("%-4d %-22s %-24s %14.6f %14.6f %16s\n",
                              e.sequence, e.timestamp, e.observable,
                              e.leakage_nats, Nats(e.leakage_nats).bits(),
                              e.surcharge.ToString()));
  }
  absl::StrAppend(&out,
                  absl::StrFormat("Total leakage: %.6f nats (%.6f bits)\n",
                                  total_leakage_nats, total_leakage_bits));
  absl::StrAppend(&out, "Total surcharge: ", total_surcharge.ToString(), " ",
                  currency, "\n");
  absl::StrAppend(&out, "Production cost (c_p): ", production_cost.ToString(),
                  " ", currency, "\n");
  absl::StrAppend(&out, "Grand total: ", grand_total.ToString(), " ", currency,
                  "\n");
  absl::StrAppend(&out, "Decision: ", ConsentName(decision), "\n");
  absl::StrAppend(&out, kIndependenceDisclaimer, "\n");
  return out;
}

std::string ClosureReport::ToJson() const {
  ordered_json doc = ordered_json::object();
  doc["session"] = session_id;
  doc["currency"] = currency;
  doc["decision"] = ConsentName(decision);
  doc["events"] = ordered_json::array();
  for (const AuditEvent& e : events) doc["events"].push_back(EventToJson(e));
  doc["total_leakage_nats"] = total_leakage_nats;
  doc["total_leakage_bits"] = total_leakage_bits;
  doc["total_surcharge"] = total_surcharge.ToString();
  doc["c_p"] = production_cost.ToString();
  doc["grand_total"] = grand_total.ToString();
  doc["disclaimer"] = kIndependenceDisclaimer;
  return doc.dump(2) + "\n";
}

}  // namespace privleak
