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

#include "privleak/privleak.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_join.h"
#include "core/audit.h"
#include "core/csv.h"
#include "core/estimation.h"
#include "core/info_units.h"
#include "core/infotheory.h"
#include "core/money.h"
#include "core/pricing.h"
#include "core/schema.h"
#include "json.hpp"

struct privleak_schema {
  privleak::ProfileSchema value;
};

struct privleak_samples {
  privleak::SampleSet value;
};

struct privleak_table {
  privleak::JointTable value;
  std::optional<privleak::ProfileSchema> schema;
};

struct privleak_policy {
  privleak::PricingPolicy value;
};

struct privleak_ledger {
  privleak::SessionLedger value;
};

namespace {

using ::nlohmann::ordered_json;

thread_local std::string last_error;

privleak_status FromCode(absl::StatusCode code) {
  switch (code) {
    case absl::StatusCode::kOk:
      return PRIVLEAK_OK;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kPermissionDenied:
      return PRIVLEAK_ERROR_IO;
    case absl::StatusCode::kDataLoss:
      return PRIVLEAK_ERROR_PARSE;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kAlreadyExists:
      return PRIVLEAK_ERROR_VALIDATION;
    case absl::StatusCode::kFailedPrecondition:
      return PRIVLEAK_ERROR_DOMAIN;
    default:
      return PRIVLEAK_ERROR_INTERNAL;
  }
}

privleak_status Fail(const absl::Status& status) {
  last_error = std::string(status.message());
  return FromCode(status.code());
}

privleak_status Fail(privleak_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

privleak_status Ok() {
  last_error.clear();
  return PRIVLEAK_OK;
}

// Runs `body`, translating escaped exceptions into status codes so that
// nothing propagates across the C boundary.
template <typename F>
privleak_status Guard(F&& body) {
  try {
    return body();
  } catch (const std::bad_alloc&) {
    return Fail(PRIVLEAK_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PRIVLEAK_ERROR_INTERNAL, e.what());
  } catch (...) {
    return Fail(PRIVLEAK_ERROR_INTERNAL, "unknown exception");
  }
}

#define CHECK_ARG(cond)                                              \
  do {                                                               \
    if (!(cond)) {                                                   \
      return Fail(PRIVLEAK_ERROR_VALIDATION,                         \
                  "invalid argument: " #cond);                       \
    }                                                                \
  } while (0)

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

privleak::InfoUnit ToUnit(privleak_unit unit) {
  return unit == PRIVLEAK_BITS ? privleak::InfoUnit::kBits
                               : privleak::InfoUnit::kNats;
}

bool ValidUnit(privleak_unit unit) {
  return unit == PRIVLEAK_NATS || unit == PRIVLEAK_BITS;
}

privleak_rule FromRule(privleak::PricingRule rule) {
  switch (rule) {
    case privleak::PricingRule::kLinear:
      return PRIVLEAK_RULE_LINEAR;
    case privleak::PricingRule::kWeighted:
      return PRIVLEAK_RULE_WEIGHTED;
    case privleak::PricingRule::kExposure:
      return PRIVLEAK_RULE_EXPOSURE;
  }
  return PRIVLEAK_RULE_LINEAR;
}

privleak_consent FromConsent(privleak::ConsentStatus status) {
  switch (status) {
    case privleak::ConsentStatus::kGranted:
      return PRIVLEAK_CONSENT_GRANTED;
    case privleak::ConsentStatus::kDenied:
      return PRIVLEAK_CONSENT_DENIED;
    default:
      return PRIVLEAK_CONSENT_PENDING;
  }
}

privleak_method FromMethod(privleak::EstimationMethod method) {
  switch (method) {
    case privleak::EstimationMethod::kPlugInCounts:
      return PRIVLEAK_METHOD_PLUGIN;
    case privleak::EstimationMethod::kKdeMonteCarlo:
      return PRIVLEAK_METHOD_KDE;
    default:
      return PRIVLEAK_METHOD_AUTO;
  }
}

void FillQuote(const privleak::PriceQuote& q, privleak_quote* out) {
  out->total = q.total.minor_units();
  out->production = q.production_component.minor_units();
  out->surcharge = q.surcharge_component.minor_units();
  out->leakage_nats = q.leakage.nats();
  out->rule = FromRule(q.rule);
}

template <typename Handle, typename T>
privleak_status Emit(absl::StatusOr<T> result, Handle** out) {
  if (!result.ok()) return Fail(result.status());
  *out = new Handle{*std::move(result)};
  return Ok();
}

privleak::SessionOptions MakeOptions(const char* session_id,
                                     const char* opened_at,
                                     const char* journal_path) {
  privleak::SessionOptions options;
  if (session_id != nullptr) options.session_id = session_id;
  if (opened_at != nullptr) options.opened_at = opened_at;
  if (journal_path != nullptr) options.journal_path = journal_path;
  return options;
}

}  // namespace

extern "C" {

const char* privleak_version(void) { return PRIVLEAK_VERSION_STRING; }

const char* privleak_last_error(void) { return last_error.c_str(); }

void privleak_string_free(char* s) { std::free(s); }

size_t privleak_money_format(int64_t minor_units, char* buf, size_t buf_len) {
  const std::string text =
      privleak::Money::FromMinorUnits(minor_units).ToString();
  if (buf != nullptr && buf_len > text.size()) {
    std::memcpy(buf, text.c_str(), text.size() + 1);
  }
  return text.size();
}

privleak_status privleak_money_parse(const char* text, int64_t* minor_units) {
  CHECK_ARG(text != nullptr && minor_units != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::Money> m = privleak::Money::Parse(text);
    if (!m.ok()) return Fail(m.status());
    *minor_units = m->minor_units();
    return Ok();
  });
}

// ---- schema and samples ---------------------------------------------------

privleak_status privleak_schema_load(const char* path, privleak_schema** out) {
  CHECK_ARG(path != nullptr && out != nullptr);
  return Guard([&] { return Emit(privleak::LoadSchema(path), out); });
}

privleak_status privleak_schema_parse(const char* json,
                                      privleak_schema** out) {
  CHECK_ARG(json != nullptr && out != nullptr);
  return Guard([&] { return Emit(privleak::ParseSchemaJson(json), out); });
}

void privleak_schema_free(privleak_schema* schema) { delete schema; }

size_t privleak_schema_attribute_count(const privleak_schema* s) {
  return s == nullptr ? 0 : s->value.protected_count();
}

privleak_status privleak_schema_intersection_labels(
    const privleak_schema* schema, char** out) {
  CHECK_ARG(schema != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<std::vector<std::string>> labels =
        privleak::BuildIntersectionLabels(schema->value);
    if (!labels.ok()) return Fail(labels.status());
    *out = CopyString(absl::StrJoin(*labels, "\n"));
    return Ok();
  });
}

privleak_status privleak_schema_to_json(const privleak_schema* schema,
                                        char** out) {
  CHECK_ARG(schema != nullptr && out != nullptr);
  return Guard([&] {
    *out = CopyString(privleak::SchemaToJson(schema->value));
    return Ok();
  });
}

privleak_status privleak_samples_load(const privleak_schema* schema,
                                      const char* path,
                                      privleak_samples** out) {
  CHECK_ARG(schema != nullptr && path != nullptr && out != nullptr);
  return Guard(
      [&] { return Emit(privleak::LoadSamples(path, schema->value), out); });
}

privleak_status privleak_samples_parse(const privleak_schema* schema,
                                       const char* csv,
                                       privleak_samples** out) {
  CHECK_ARG(schema != nullptr && csv != nullptr && out != nullptr);
  return Guard([&] {
    return Emit(privleak::ParseSamplesCsv(csv, schema->value), out);
  });
}

void privleak_samples_free(privleak_samples* samples) { delete samples; }

size_t privleak_samples_count(const privleak_samples* samples) {
  return samples == nullptr ? 0 : samples->value.size();
}

int privleak_samples_all_categorical(const privleak_samples* samples) {
  return samples != nullptr && samples->value.schema().all_categorical();
}

privleak_status privleak_samples_discretize(const privleak_samples* samples,
                                            const char* binning_spec,
                                            privleak_samples** out,
                                            char** cuts_json) {
  CHECK_ARG(samples != nullptr && binning_spec != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::BinningPolicy> policy =
        privleak::ParseBinningSpec(binning_spec);
    if (!policy.ok()) return Fail(policy.status());
    absl::StatusOr<privleak::Discretization> result =
        privleak::Discretize(samples->value, *policy);
    if (!result.ok()) return Fail(result.status());
    if (cuts_json != nullptr) {
      ordered_json cuts = ordered_json::object();
      for (const auto& [name, points] : result->cuts) cuts[name] = points;
      *cuts_json = CopyString(cuts.dump());
    }
    *out = new privleak_samples{std::move(result->samples)};
    return Ok();
  });
}

privleak_status privleak_samples_to_csv(const privleak_samples* samples,
                                        char** out) {
  CHECK_ARG(samples != nullptr && out != nullptr);
  return Guard([&] {
    *out = CopyString(privleak::SamplesToCsv(samples->value));
    return Ok();
  });
}

privleak_status privleak_samples_schema_json(const privleak_samples* samples,
                                             char** out) {
  CHECK_ARG(samples != nullptr && out != nullptr);
  return Guard([&] {
    *out = CopyString(privleak::SchemaToJson(samples->value.schema()));
    return Ok();
  });
}

// ---- joint tables ---------------------------------------------------------

privleak_status privleak_table_load(const char* path, privleak_table** out) {
  CHECK_ARG(path != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::JointTable> table = privleak::LoadJointTable(path);
    if (!table.ok()) return Fail(table.status());
    *out = new privleak_table{*std::move(table), std::nullopt};
    return Ok();
  });
}

privleak_status privleak_table_parse(const char* csv, privleak_table** out) {
  CHECK_ARG(csv != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::JointTable> table =
        privleak::ParseJointTableCsv(csv);
    if (!table.ok()) return Fail(table.status());
    *out = new privleak_table{*std::move(table), std::nullopt};
    return Ok();
  });
}

privleak_status privleak_table_create(size_t rows, size_t cols,
                                      const double* probabilities,
                                      const char* const* x_labels,
                                      const char* const* s_labels,
                                      privleak_table** out) {
  CHECK_ARG(probabilities != nullptr && out != nullptr);
  CHECK_ARG(rows > 0 && cols > 0);
  return Guard([&] {
    std::vector<std::string> xs, ss;
    for (size_t i = 0; i < rows; ++i) {
      xs.push_back(x_labels != nullptr ? std::string(x_labels[i])
                                       : "x" + std::to_string(i));
    }
    for (size_t j = 0; j < cols; ++j) {
      ss.push_back(s_labels != nullptr ? std::string(s_labels[j])
                                       : "s" + std::to_string(j));
    }
    absl::StatusOr<privleak::JointTable> table = privleak::JointTable::Create(
        std::move(xs), std::move(ss),
        std::vector<double>(probabilities, probabilities + rows * cols));
    if (!table.ok()) return Fail(table.status());
    *out = new privleak_table{*std::move(table), std::nullopt};
    return Ok();
  });
}

privleak_status privleak_table_from_samples(const privleak_samples* samples,
                                            privleak_table** out) {
  CHECK_ARG(samples != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::JointTable> table =
        privleak::EmpiricalJoint(samples->value);
    if (!table.ok()) return Fail(table.status());
    *out = new privleak_table{*std::move(table), samples->value.schema()};
    return Ok();
  });
}

privleak_status privleak_table_attach_schema(privleak_table* table,
                                             const privleak_schema* schema) {
  CHECK_ARG(table != nullptr && schema != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::JointTable> factored =
        privleak::AttachSchema(table->value, schema->value);
    if (!factored.ok()) return Fail(factored.status());
    table->value = *std::move(factored);
    table->schema = schema->value;
    return Ok();
  });
}

void privleak_table_free(privleak_table* table) { delete table; }

size_t privleak_table_warning_count(const privleak_table* t) {
  return t == nullptr ? 0 : t->value.warnings().size();
}

const char* privleak_table_warning(const privleak_table* t, size_t index) {
  if (t == nullptr || index >= t->value.warnings().size()) return nullptr;
  return t->value.warnings()[index].c_str();
}

// ---- information measures -------------------------------------------------

privleak_status privleak_entropy(const double* dist, size_t n,
                                 privleak_unit unit, double* out) {
  CHECK_ARG(dist != nullptr && out != nullptr && ValidUnit(unit));
  return Guard([&] {
    absl::StatusOr<privleak::InfoQuantity> h =
        privleak::Entropy(std::span<const double>(dist, n), ToUnit(unit));
    if (!h.ok()) return Fail(h.status());
    *out = h->value;
    return Ok();
  });
}

privleak_status privleak_table_entropies(const privleak_table* table,
                                         privleak_unit unit,
                                         privleak_entropies* out) {
  CHECK_ARG(table != nullptr && out != nullptr && ValidUnit(unit));
  return Guard([&] {
    const privleak::InfoUnit u = ToUnit(unit);
    out->h_s = privleak::EntropyOfS(table->value, u).value;
    out->h_x = privleak::EntropyOfX(table->value, u).value;
    out->h_s_given_x = privleak::ConditionalEntropy(table->value, u).value;
    out->h_xs = privleak::JointEntropy(table->value, u).value;
    return Ok();
  });
}

privleak_status privleak_mutual_information(const privleak_table* table,
                                            privleak_unit unit, double* out,
                                            int* clamped) {
  CHECK_ARG(table != nullptr && out != nullptr && ValidUnit(unit));
  return Guard([&] {
    absl::StatusOr<privleak::MutualInfo> mi =
        privleak::MutualInformation(table->value, ToUnit(unit));
    if (!mi.ok()) return Fail(mi.status());
    *out = mi->value.value;
    if (clamped != nullptr) *clamped = mi->clamped ? 1 : 0;
    return Ok();
  });
}

privleak_status privleak_exposure_ratio(const privleak_table* table,
                                        double* out) {
  CHECK_ARG(table != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<double> r = privleak::ExposureRatio(table->value);
    if (!r.ok()) return Fail(r.status());
    *out = *r;
    return Ok();
  });
}

privleak_status privleak_marginal_mi(const privleak_table* table,
                                     const char* subset_key,
                                     privleak_unit unit, double* out) {
  CHECK_ARG(table != nullptr && subset_key != nullptr && out != nullptr &&
            ValidUnit(unit));
  return Guard([&] {
    if (!table->value.factored()) {
      return Fail(PRIVLEAK_ERROR_DOMAIN,
                  "table has no attribute structure; attach a schema first");
    }
    absl::StatusOr<std::vector<size_t>> subset =
        privleak::ParseSubsetKey(table->value.factor_names(), subset_key);
    if (!subset.ok()) return Fail(subset.status());
    absl::StatusOr<privleak::InfoQuantity> mi =
        privleak::MarginalMi(table->value, *subset, ToUnit(unit));
    if (!mi.ok()) return Fail(mi.status());
    *out = mi->value;
    return Ok();
  });
}

privleak_status privleak_leakage_report_json(const privleak_table* table,
                                             privleak_unit unit, char** out) {
  CHECK_ARG(table != nullptr && out != nullptr && ValidUnit(unit));
  return Guard([&] {
    absl::StatusOr<privleak::LeakageReport> report =
        privleak::IntersectionLeakageReport(table->value, ToUnit(unit));
    if (!report.ok()) return Fail(report.status());
    ordered_json doc = ordered_json::object();
    doc["unit"] = std::string(privleak::UnitName(ToUnit(unit)));
    doc["entries"] = ordered_json::array();
    for (const privleak::LeakageEntry& entry : *report) {
      ordered_json e = ordered_json::object();
      e["subset"] = entry.key;
      e["value"] = entry.value.value;
      doc["entries"].push_back(std::move(e));
    }
    *out = CopyString(doc.dump());
    return Ok();
  });
}

double privleak_convert_units(double value, privleak_unit from,
                              privleak_unit to) {
  return privleak::ConvertUnits({value, ToUnit(from)}, ToUnit(to)).value;
}

// ---- estimation -----------------------------------------------------------

void privleak_estimate_options_init(privleak_estimate_options* options) {
  if (options == nullptr) return;
  options->method = PRIVLEAK_METHOD_AUTO;
  options->seed = 0;
  options->max_eval_points = 0;
  options->bandwidths = nullptr;
}

privleak_status privleak_silverman_bandwidth(const double* values, size_t n,
                                             double* out) {
  CHECK_ARG(values != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<double> h =
        privleak::SilvermanBandwidth(std::span<const double>(values, n));
    if (!h.ok()) return Fail(h.status());
    *out = *h;
    return Ok();
  });
}

privleak_status privleak_estimate(const privleak_samples* samples,
                                  const privleak_estimate_options* options,
                                  privleak_estimate_result* out,
                                  char** report_json) {
  CHECK_ARG(samples != nullptr && out != nullptr);
  return Guard([&] {
    privleak_estimate_options defaults;
    privleak_estimate_options_init(&defaults);
    const privleak_estimate_options& opts =
        options != nullptr ? *options : defaults;

    privleak::EstimateOptions core;
    switch (opts.method) {
      case PRIVLEAK_METHOD_AUTO:
        core.method = privleak::EstimationMethod::kAuto;
        break;
      case PRIVLEAK_METHOD_PLUGIN:
        core.method = privleak::EstimationMethod::kPlugInCounts;
        break;
      case PRIVLEAK_METHOD_KDE:
        core.method = privleak::EstimationMethod::kKdeMonteCarlo;
        break;
      default:
        return Fail(PRIVLEAK_ERROR_VALIDATION, "unknown estimation method");
    }
    core.seed = opts.seed;
    core.max_eval_points = opts.max_eval_points;
    if (opts.bandwidths != nullptr && opts.bandwidths[0] != '\0') {
      absl::StatusOr<privleak::BandwidthSet> bw =
          privleak::ParseBandwidthSpec(opts.bandwidths);
      if (!bw.ok()) return Fail(bw.status());
      core.bandwidth_overrides = *std::move(bw);
    }

    absl::StatusOr<privleak::MiEstimate> est =
        privleak::EstimateMutualInformation(samples->value, core);
    if (!est.ok()) return Fail(est.status());

    out->value_nats = est->value.nats();
    out->raw_nats = est->raw_nats;
    out->n = est->n;
    out->eval_points = est->eval_points;
    out->method = FromMethod(est->method);
    out->has_seed = est->seed.has_value() ? 1 : 0;
    out->seed = est->seed.value_or(0);

    if (report_json != nullptr) {
      ordered_json doc = ordered_json::object();
      doc["mi_nats"] = est->value.nats();
      doc["mi_bits"] = est->value.bits();
      doc["raw_nats"] = est->raw_nats;
      doc["method"] = std::string(privleak::MethodName(est->method));
      doc["n"] = est->n;
      doc["eval_points"] = est->eval_points;
      ordered_json bw = ordered_json::object();
      for (const auto& [name, h] : est->bandwidths.widths()) bw[name] = h;
      doc["bandwidths"] = std::move(bw);
      if (est->seed.has_value()) {
        doc["seed"] = *est->seed;
      } else {
        doc["seed"] = nullptr;
      }
      doc["warnings"] = est->warnings;
      *report_json = CopyString(doc.dump());
    }
    return Ok();
  });
}

// ---- pricing --------------------------------------------------------------

privleak_status privleak_policy_load(const char* path, privleak_policy** out) {
  CHECK_ARG(path != nullptr && out != nullptr);
  return Guard([&] { return Emit(privleak::LoadPolicy(path), out); });
}

privleak_status privleak_policy_parse(const char* json,
                                      privleak_policy** out) {
  CHECK_ARG(json != nullptr && out != nullptr);
  return Guard([&] { return Emit(privleak::ParsePolicyJson(json), out); });
}

void privleak_policy_free(privleak_policy* policy) { delete policy; }

privleak_status privleak_policy_to_json(const privleak_policy* policy,
                                        char** out) {
  CHECK_ARG(policy != nullptr && out != nullptr);
  return Guard([&] {
    *out = CopyString(privleak::PolicyToJson(policy->value));
    return Ok();
  });
}

size_t privleak_policy_currency(const privleak_policy* policy, char* buf,
                                size_t buf_len) {
  if (policy == nullptr) return 0;
  const std::string& c = policy->value.currency;
  if (buf != nullptr && buf_len > c.size()) {
    std::memcpy(buf, c.c_str(), c.size() + 1);
  }
  return c.size();
}

privleak_status privleak_policy_set_lambda(privleak_policy* policy,
                                           double lambda, privleak_unit per) {
  CHECK_ARG(policy != nullptr && ValidUnit(per));
  return Guard([&] {
    absl::StatusOr<double> per_nat = privleak::ConvertLambda(
        lambda, ToUnit(per), privleak::InfoUnit::kNats, std::nullopt);
    if (!per_nat.ok()) return Fail(per_nat.status());
    privleak::PricingPolicy updated = policy->value;
    updated.lambda_per_nat = *per_nat;
    updated.subset_lambdas_per_nat.clear();
    if (absl::Status s = updated.Validate(); !s.ok()) return Fail(s);
    policy->value = std::move(updated);
    return Ok();
  });
}

privleak_status privleak_policy_set_pi_max(privleak_policy* policy,
                                           int64_t pi_max_minor_units) {
  CHECK_ARG(policy != nullptr);
  return Guard([&] {
    privleak::PricingPolicy updated = policy->value;
    updated.pi_max = privleak::Money::FromMinorUnits(pi_max_minor_units);
    if (absl::Status s = updated.Validate(); !s.ok()) return Fail(s);
    policy->value = std::move(updated);
    return Ok();
  });
}

privleak_status privleak_price_linear(const privleak_policy* policy,
                                      double leakage, privleak_unit unit,
                                      privleak_quote* out) {
  CHECK_ARG(policy != nullptr && out != nullptr && ValidUnit(unit));
  return Guard([&] {
    absl::StatusOr<privleak::PriceQuote> q =
        privleak::PriceLinear(policy->value, {leakage, ToUnit(unit)});
    if (!q.ok()) return Fail(q.status());
    FillQuote(*q, out);
    return Ok();
  });
}

privleak_status privleak_price_weighted(const privleak_policy* policy,
                                        const privleak_table* table,
                                        privleak_quote* out) {
  CHECK_ARG(policy != nullptr && table != nullptr && out != nullptr);
  return Guard([&] {
    if (!table->value.factored()) {
      return Fail(PRIVLEAK_ERROR_DOMAIN,
                  "weighted pricing needs a table with a schema attached");
    }
    absl::StatusOr<privleak::LeakageReport> report =
        privleak::IntersectionLeakageReport(table->value,
                                            privleak::InfoUnit::kNats);
    if (!report.ok()) return Fail(report.status());
    absl::StatusOr<privleak::PriceQuote> q =
        privleak::PriceWeighted(policy->value, *report);
    if (!q.ok()) return Fail(q.status());
    FillQuote(*q, out);
    return Ok();
  });
}

privleak_status privleak_price_exposure(const privleak_policy* policy,
                                        const privleak_table* table,
                                        privleak_quote* out) {
  CHECK_ARG(policy != nullptr && table != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<privleak::PriceQuote> q =
        privleak::PriceExposure(policy->value, table->value);
    if (!q.ok()) return Fail(q.status());
    FillQuote(*q, out);
    return Ok();
  });
}

privleak_status privleak_calibrate_lambda(int64_t pi_max_minor_units,
                                          double baseline_entropy,
                                          privleak_unit unit,
                                          double* lambda_per_nat) {
  CHECK_ARG(lambda_per_nat != nullptr && ValidUnit(unit));
  return Guard([&] {
    absl::StatusOr<double> lambda = privleak::CalibrateLambda(
        privleak::Money::FromMinorUnits(pi_max_minor_units),
        {baseline_entropy, ToUnit(unit)});
    if (!lambda.ok()) return Fail(lambda.status());
    *lambda_per_nat = *lambda;
    return Ok();
  });
}

privleak_status privleak_convert_lambda(double lambda, privleak_unit from_per,
                                        privleak_unit to_per,
                                        const double* exchange_rate,
                                        double* out) {
  CHECK_ARG(out != nullptr && ValidUnit(from_per) && ValidUnit(to_per));
  return Guard([&] {
    std::optional<double> rho;
    if (exchange_rate != nullptr) rho = *exchange_rate;
    absl::StatusOr<double> converted = privleak::ConvertLambda(
        lambda, ToUnit(from_per), ToUnit(to_per), rho);
    if (!converted.ok()) return Fail(converted.status());
    *out = *converted;
    return Ok();
  });
}

privleak_status privleak_price_curve_csv(const privleak_policy* policy,
                                         privleak_rule rule, double from,
                                         double to, double step,
                                         double baseline_entropy_nats,
                                         char** out) {
  CHECK_ARG(policy != nullptr && out != nullptr);
  return Guard([&] {
    privleak::PricingRule core_rule;
    switch (rule) {
      case PRIVLEAK_RULE_LINEAR:
        core_rule = privleak::PricingRule::kLinear;
        break;
      case PRIVLEAK_RULE_WEIGHTED:
        core_rule = privleak::PricingRule::kWeighted;
        break;
      case PRIVLEAK_RULE_EXPOSURE:
        core_rule = privleak::PricingRule::kExposure;
        break;
      default:
        return Fail(PRIVLEAK_ERROR_VALIDATION, "unknown pricing rule");
    }
    std::optional<double> baseline;
    if (core_rule == privleak::PricingRule::kExposure) {
      baseline = baseline_entropy_nats;
    }
    absl::StatusOr<std::vector<privleak::CurvePoint>> curve =
        privleak::PriceCurve(policy->value, core_rule, {from, to, step},
                             baseline);
    if (!curve.ok()) return Fail(curve.status());
    *out = CopyString(privleak::CurveToCsv(*curve));
    return Ok();
  });
}

// ---- audit ledger ---------------------------------------------------------

privleak_status privleak_ledger_open(const privleak_policy* policy,
                                     const char* session_id,
                                     const char* opened_at,
                                     const char* journal_path,
                                     privleak_ledger** out) {
  CHECK_ARG(policy != nullptr && out != nullptr);
  return Guard([&] {
    return Emit(privleak::SessionLedger::Open(
                    policy->value,
                    MakeOptions(session_id, opened_at, journal_path)),
                out);
  });
}

privleak_status privleak_ledger_record(privleak_ledger* ledger,
                                       const char* observable, double leakage,
                                       privleak_unit unit,
                                       const char* timestamp) {
  CHECK_ARG(ledger != nullptr && observable != nullptr && ValidUnit(unit));
  return Guard([&] {
    std::optional<std::string> ts;
    if (timestamp != nullptr) ts = timestamp;
    absl::Status s =
        ledger->value.Record(observable, {leakage, ToUnit(unit)}, ts);
    if (!s.ok()) return Fail(s);
    return Ok();
  });
}

privleak_status privleak_ledger_close(privleak_ledger* ledger,
                                      privleak_consent decision,
                                      const char* timestamp) {
  CHECK_ARG(ledger != nullptr);
  return Guard([&] {
    privleak::ConsentStatus status;
    switch (decision) {
      case PRIVLEAK_CONSENT_GRANTED:
        status = privleak::ConsentStatus::kGranted;
        break;
      case PRIVLEAK_CONSENT_DENIED:
        status = privleak::ConsentStatus::kDenied;
        break;
      default:
        return Fail(PRIVLEAK_ERROR_VALIDATION,
                    "a session closes with granted or denied");
    }
    std::optional<std::string> ts;
    if (timestamp != nullptr) ts = timestamp;
    absl::StatusOr<privleak::ClosureReport> report =
        ledger->value.Close(status, ts);
    if (!report.ok()) return Fail(report.status());
    return Ok();
  });
}

privleak_status privleak_ledger_totals_get(const privleak_ledger* ledger,
                                           privleak_ledger_totals* out) {
  CHECK_ARG(ledger != nullptr && out != nullptr);
  return Guard([&] {
    const privleak::ClosureReport report = ledger->value.Summary();
    out->events = report.events.size();
    out->leakage_nats = report.total_leakage_nats;
    out->surcharge = report.total_surcharge.minor_units();
    out->production = report.production_cost.minor_units();
    out->grand_total = report.grand_total.minor_units();
    out->consent = FromConsent(report.decision);
    return Ok();
  });
}

privleak_status privleak_ledger_report(const privleak_ledger* ledger,
                                       privleak_format format, char** out) {
  CHECK_ARG(ledger != nullptr && out != nullptr);
  return Guard([&] {
    const privleak::ClosureReport report = ledger->value.Summary();
    *out = CopyString(format == PRIVLEAK_FORMAT_MACHINE ? report.ToJson()
                                                        : report.ToText());
    return Ok();
  });
}

privleak_status privleak_ledger_write(const privleak_ledger* ledger,
                                      const char* path) {
  CHECK_ARG(ledger != nullptr && path != nullptr);
  return Guard([&] {
    absl::Status s = ledger->value.WriteTo(path);
    if (!s.ok()) return Fail(s);
    return Ok();
  });
}

privleak_status privleak_ledger_load(const char* path, privleak_ledger** out) {
  CHECK_ARG(path != nullptr && out != nullptr);
  return Guard([&] { return Emit(privleak::SessionLedger::Read(path), out); });
}

privleak_status privleak_audit_stream(const privleak_policy* policy,
                                      const char* stream_path,
                                      const char* session_id,
                                      const char* fallback_timestamp,
                                      const char* journal_path,
                                      privleak_ledger** out) {
  CHECK_ARG(policy != nullptr && stream_path != nullptr && out != nullptr);
  return Guard([&] {
    absl::StatusOr<std::string> stream = privleak::ReadFile(stream_path);
    if (!stream.ok()) return Fail(stream.status());
    privleak::SessionOptions options =
        MakeOptions(session_id, fallback_timestamp, journal_path);
    if (fallback_timestamp != nullptr) {
      if (absl::Status s = privleak::ValidateTimestamp(fallback_timestamp);
          !s.ok()) {
        return Fail(s);
      }
      options.clock = [ts = std::string(fallback_timestamp)] { return ts; };
    }
    return Emit(privleak::ReplayEventStream(policy->value, *stream,
                                            std::move(options)),
                out);
  });
}

void privleak_ledger_free(privleak_ledger* ledger) { delete ledger; }

}  // extern "C"
