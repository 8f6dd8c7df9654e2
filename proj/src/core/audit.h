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

#ifndef PRIVLEAK_CORE_AUDIT_H_
#define PRIVLEAK_CORE_AUDIT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "core/info_units.h"
#include "core/money.h"
#include "core/pricing.h"

namespace privleak {

enum class ConsentStatus { kPending, kGranted, kDenied };

absl::string_view ConsentName(ConsentStatus status);
absl::StatusOr<ConsentStatus> ParseConsent(absl::string_view name);

// Printed on every closure report: per-event gains are summed as if the
// observations were independent.
inline constexpr absl::string_view kIndependenceDisclaimer =
    "Note: totals add per-event information gains and assume the recorded "
    "observations are mutually independent.";

struct AuditEvent {
  int64_t sequence = 0;
  std::string timestamp;  // ISO-8601, UTC
  std::string observable;
  double leakage_nats = 0.0;
  Money surcharge;
  std::string rule;

  friend bool operator==(const AuditEvent&, const AuditEvent&) = default;
};

struct ClosureReport {
  std::string session_id;
  std::string currency;
  ConsentStatus decision = ConsentStatus::kPending;
  std::vector<AuditEvent> events;
  double total_leakage_nats = 0.0;
  double total_leakage_bits = 0.0;
  Money total_surcharge;
  Money production_cost;
  Money grand_total;  // production_cost + total_surcharge

  std::string ToText() const;
  std::string ToJson() const;
};

struct SessionOptions {
  // Generated when absent; two sessions never share a generated id.
  std::optional<std::string> session_id;
  // Opening timestamp; taken from the clock when absent.
  std::optional<std::string> opened_at;
  // Supplies timestamps for records that do not carry one. Defaults to
  // the current UTC time.
  std::function<std::string()> clock;
  // When set, every record is appended to this file as it happens.
  std::optional<std::string> journal_path;
};

// Append-only record of one session's disclosures. The policy is frozen
// at open time; c_p is charged once per session and per-event surcharges
// are lambda * leakage under the linear rule. Rounding is applied to the
// running total, so the billed surcharge always equals the rounded price
// of the summed leakage.
class SessionLedger {
 public:
  static absl::StatusOr<SessionLedger> Open(PricingPolicy policy,
                                            SessionOptions options = {});

  // Appends one disclosure. Fails once consent has been decided.
  absl::Status Record(std::string observable, InfoQuantity leakage,
                      std::optional<std::string> timestamp = std::nullopt);

  // Records the consent decision and returns the final report.
  absl::StatusOr<ClosureReport> Close(
      ConsentStatus decision,
      std::optional<std::string> timestamp = std::nullopt);

  // Report for the current state; the decision may still be pending.
  ClosureReport Summary() const;

  const std::string& session_id() const { return session_id_; }
  const std::string& opened_at() const { return opened_at_; }
  const std::optional<std::string>& closed_at() const { return closed_at_; }
  const PricingPolicy& policy() const { return policy_; }
  const std::vector<AuditEvent>& events() const { return events_; }
  double total_leakage_nats() const { return total_leakage_nats_; }
  Money total_surcharge() const { return total_surcharge_; }
  ConsentStatus consent() const { return consent_; }

  // One JSON record per line: header, events, optional closure.
  std::string Serialize() const;
  absl::Status WriteTo(const std::string& path) const;
  static absl::StatusOr<SessionLedger> Parse(absl::string_view text);
  static absl::StatusOr<SessionLedger> Read(const std::string& path);

  friend bool operator==(const SessionLedger& a, const SessionLedger& b);

 private:
  SessionLedger() = default;

  absl::Status Journal(const std::string& line) const;
  std::string Now() const;

  std::string session_id_;
  std::string opened_at_;
  std::optional<std::string> closed_at_;
  PricingPolicy policy_;
  std::vector<AuditEvent> events_;
  double total_leakage_nats_ = 0.0;
  Money total_surcharge_;
  ConsentStatus consent_ = ConsentStatus::kPending;
  std::function<std::string()> clock_;
  std::optional<std::string> journal_path_;
};

// Replays a JSON-lines event stream into a fresh ledger. Recognised lines:
//   {"session": "id", "timestamp": "..."}          optional, first line only
//   {"observable": "x", "leakage": 0.02, "unit": "nats", "timestamp": "..."}
//   {"decision": "granted" | "denied", "timestamp": "..."}
// Any line after the decision is a FailedPrecondition error.
absl::StatusOr<SessionLedger> ReplayEventStream(const PricingPolicy& policy,
                                                absl::string_view stream,
                                                SessionOptions options = {});

// Accepts RFC 3339 timestamps such as 2025-07-01T10:00:00Z.
absl::Status ValidateTimestamp(absl::string_view timestamp);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_AUDIT_H_
