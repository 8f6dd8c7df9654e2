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

// Command-line front end for the privleak library. Links only the C API.
//
// Exit codes: 0 on success, 2 for I/O, parse and usage errors, 3 for
// validation and domain errors.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "privleak/privleak.h"

namespace {

using ::nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitInvalid = 3;

// Stamps untimestamped audit records so replays do not depend on the clock.
constexpr char kEpoch[] = "1970-01-01T00:00:00Z";

class Failure : public std::runtime_error {
 public:
  Failure(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

int ExitCodeFor(privleak_status status) {
  switch (status) {
    case PRIVLEAK_OK:
      return kExitOk;
    case PRIVLEAK_ERROR_IO:
    case PRIVLEAK_ERROR_PARSE:
      return kExitIo;
    default:
      return kExitInvalid;
  }
}

void Check(privleak_status status, const std::string& context) {
  if (status == PRIVLEAK_OK) return;
  throw Failure(ExitCodeFor(status),
                context + ": " + std::string(privleak_last_error()));
}

[[noreturn]] void Invalid(const std::string& message) {
  throw Failure(kExitInvalid, message);
}

struct Deleter {
  void operator()(privleak_schema* p) const { privleak_schema_free(p); }
  void operator()(privleak_samples* p) const { privleak_samples_free(p); }
  void operator()(privleak_table* p) const { privleak_table_free(p); }
  void operator()(privleak_policy* p) const { privleak_policy_free(p); }
  void operator()(privleak_ledger* p) const { privleak_ledger_free(p); }
  void operator()(char* p) const { privleak_string_free(p); }
};

template <typename T>
using Owned = std::unique_ptr<T, Deleter>;

std::string Take(char* raw) {
  Owned<char> owned(raw);
  return raw == nullptr ? std::string() : std::string(raw);
}

std::string Fixed(double value, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, value);
  return buf;
}

std::string General(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::string MoneyText(int64_t minor_units) {
  char buf[32];
  privleak_money_format(minor_units, buf, sizeof(buf));
  return buf;
}

int64_t ParseMoney(const std::string& text, const std::string& what) {
  int64_t units = 0;
  Check(privleak_money_parse(text.c_str(), &units), what);
  return units;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kExitIo, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure(kExitIo, "cannot write '" + path + "'");
  out << contents;
  out.close();
  if (!out) throw Failure(kExitIo, "cannot write '" + path + "'");
}

// Sends `text` to --out when given, else to stdout.
void Emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    WriteText(out_path, text);
  }
}

struct Options {
  std::string schema;
  std::string samples;
  std::string table;
  std::string policy;
  std::string unit = "nats";
  uint64_t seed = 0;
  std::string bins;
  std::string format = "text";
  std::string out;
  bool verbose = false;

  // Subcommand specific.
  std::string method = "auto";
  std::string bandwidth;
  size_t max_eval = 0;
  std::string subset;
  bool all_subsets = false;
  std::string rule = "linear";
  std::optional<double> leakage;
  std::vector<double> lambdas;
  std::string lambda_per = "nat";
  std::vector<std::string> pi_max;
  std::optional<double> entropy;
  std::optional<double> rate;
  double from = 0.0;
  std::optional<double> to;
  double step = 0.1;
  std::string events;
  std::string ledger;
  std::string session;
  std::string timestamp;
  std::string schema_out;
};

privleak_unit Unit(const Options& o) {
  return o.unit == "bits" ? PRIVLEAK_BITS : PRIVLEAK_NATS;
}

const char* UnitLabel(const Options& o) {
  return o.unit == "bits" ? "bits" : "nats";
}

bool Machine(const Options& o) { return o.format == "machine"; }

void Require(const std::string& value, const char* flag,
             const char* subcommand) {
  if (value.empty()) {
    Invalid(std::string(subcommand) + " requires " + flag);
  }
}

void Warn(const std::string& message) {
  std::cerr << "warning: " << message << "\n";
}

Owned<privleak_schema> LoadSchema(const Options& o) {
  privleak_schema* raw = nullptr;
  Check(privleak_schema_load(o.schema.c_str(), &raw), o.schema);
  return Owned<privleak_schema>(raw);
}

Owned<privleak_samples> LoadSamples(const Options& o,
                                    const privleak_schema* schema) {
  privleak_samples* raw = nullptr;
  Check(privleak_samples_load(schema, o.samples.c_str(), &raw), o.samples);
  Owned<privleak_samples> samples(raw);
  if (!o.bins.empty()) {
    privleak_samples* binned = nullptr;
    Check(privleak_samples_discretize(samples.get(), o.bins.c_str(), &binned,
                                      nullptr),
          "--bins");
    samples.reset(binned);
  }
  return samples;
}

// A joint table from --table (optionally factored by --schema) or from
// categorical --samples.
Owned<privleak_table> LoadTable(const Options& o, const char* subcommand) {
  privleak_table* raw = nullptr;
  if (!o.table.empty()) {
    Check(privleak_table_load(o.table.c_str(), &raw), o.table);
    Owned<privleak_table> table(raw);
    if (!o.schema.empty()) {
      Owned<privleak_schema> schema = LoadSchema(o);
      Check(privleak_table_attach_schema(table.get(), schema.get()),
            "attaching schema");
    }
    for (size_t i = 0; i < privleak_table_warning_count(table.get()); ++i) {
      Warn(privleak_table_warning(table.get(), i));
    }
    return table;
  }
  if (!o.samples.empty()) {
    Require(o.schema, "--schema with --samples", subcommand);
    Owned<privleak_schema> schema = LoadSchema(o);
    Owned<privleak_samples> samples = LoadSamples(o, schema.get());
    Check(privleak_table_from_samples(samples.get(), &raw), "plug-in table");
    return Owned<privleak_table>(raw);
  }
  Invalid(std::string(subcommand) + " requires --table or --samples");
}

Owned<privleak_policy> LoadPolicy(const Options& o, const char* subcommand) {
  Require(o.policy, "--policy", subcommand);
  privleak_policy* raw = nullptr;
  Check(privleak_policy_load(o.policy.c_str(), &raw), o.policy);
  return Owned<privleak_policy>(raw);
}

std::string Currency(const privleak_policy* policy) {
  char buf[64] = {0};
  privleak_policy_currency(policy, buf, sizeof(buf));
  return buf;
}

// ---- subcommands ----------------------------------------------------------

int RunEntropy(const Options& o) {
  Owned<privleak_table> table = LoadTable(o, "entropy");
  privleak_entropies h;
  Check(privleak_table_entropies(table.get(), Unit(o), &h), "entropy");
  if (Machine(o)) {
    ordered_json doc = ordered_json::object();
    doc["unit"] = UnitLabel(o);
    doc["h_s"] = h.h_s;
    doc["h_x"] = h.h_x;
    doc["h_s_given_x"] = h.h_s_given_x;
    doc["h_xs"] = h.h_xs;
    Emit(o.out, doc.dump() + "\n");
    return kExitOk;
  }
  const std::string u = std::string(" ") + UnitLabel(o) + "\n";
  Emit(o.out, "H(S)=" + Fixed(h.h_s, 6) + u + "H(X)=" + Fixed(h.h_x, 6) + u +
                  "H(S|X)=" + Fixed(h.h_s_given_x, 6) + u +
                  "H(X,S)=" + Fixed(h.h_xs, 6) + u);
  return kExitOk;
}

int RunMi(const Options& o) {
  Owned<privleak_table> table = LoadTable(o, "mi");
  ordered_json doc = ordered_json::object();
  doc["unit"] = UnitLabel(o);
  std::string text;
  const std::string u = std::string(" ") + UnitLabel(o) + "\n";

  if (!o.subset.empty()) {
    double value = 0.0;
    Check(privleak_marginal_mi(table.get(), o.subset.c_str(), Unit(o), &value),
          "mi");
    doc["subset"] = o.subset;
    doc["mi"] = value;
    text = "I(X;" + o.subset + ")=" + Fixed(value, 6) + u;
  } else {
    double value = 0.0;
    int clamped = 0;
    Check(privleak_mutual_information(table.get(), Unit(o), &value, &clamped),
          "mi");
    if (clamped && o.verbose) Warn("tiny negative mutual information clamped");
    doc["mi"] = value;
    doc["clamped"] = clamped != 0;
    text = "I(X;S)=" + Fixed(value, 6) + u;
    double r = 0.0;
    if (privleak_exposure_ratio(table.get(), &r) == PRIVLEAK_OK) {
      doc["exposure_ratio"] = r;
      text += "r=" + Fixed(r, 6) + "\n";
    } else {
      doc["exposure_ratio"] = nullptr;
    }
  }

  if (o.all_subsets) {
    char* raw = nullptr;
    Check(privleak_leakage_report_json(table.get(), Unit(o), &raw),
          "leakage report");
    ordered_json report = ordered_json::parse(Take(raw));
    doc["subsets"] = report["entries"];
    for (const ordered_json& entry : report["entries"]) {
      text += "I(X;" + entry["subset"].get<std::string>() +
              ")=" + Fixed(entry["value"].get<double>(), 6) + u;
    }
  }
  Emit(o.out, Machine(o) ? doc.dump() + "\n" : text);
  return kExitOk;
}

int RunDiscretize(const Options& o) {
  Require(o.schema, "--schema", "discretize");
  Require(o.samples, "--samples", "discretize");
  Require(o.bins, "--bins", "discretize");
  Owned<privleak_schema> schema = LoadSchema(o);
  privleak_samples* raw = nullptr;
  Check(privleak_samples_load(schema.get(), o.samples.c_str(), &raw),
        o.samples);
  Owned<privleak_samples> samples(raw);
  privleak_samples* binned_raw = nullptr;
  char* cuts_raw = nullptr;
  Check(privleak_samples_discretize(samples.get(), o.bins.c_str(), &binned_raw,
                                    &cuts_raw),
        "--bins");
  Owned<privleak_samples> binned(binned_raw);
  const ordered_json cuts = ordered_json::parse(Take(cuts_raw));

  char* csv_raw = nullptr;
  Check(privleak_samples_to_csv(binned.get(), &csv_raw), "discretize");
  const std::string csv = Take(csv_raw);
  if (!o.schema_out.empty()) {
    char* json_raw = nullptr;
    Check(privleak_samples_schema_json(binned.get(), &json_raw), "discretize");
    WriteText(o.schema_out, Take(json_raw));
  }

  // Data goes to --out (or stdout); the cut points go to whichever stream
  // the data does not occupy.
  Emit(o.out, csv);
  std::ostream& side = o.out.empty() ? std::cerr : std::cout;
  if (Machine(o)) {
    side << cuts.dump() << "\n";
  } else {
    for (const auto& [name, points] : cuts.items()) {
      std::string line = "cuts[" + name + "]=";
      for (size_t i = 0; i < points.size(); ++i) {
        if (i > 0) line += ",";
        line += Fixed(points[i].get<double>(), 6);
      }
      side << line << "\n";
    }
  }
  return kExitOk;
}

privleak_method ParseMethodFlag(const std::string& name) {
  if (name == "plugin") return PRIVLEAK_METHOD_PLUGIN;
  if (name == "kde") return PRIVLEAK_METHOD_KDE;
  return PRIVLEAK_METHOD_AUTO;
}

int RunEstimate(const Options& o) {
  Require(o.schema, "--schema", "estimate");
  Require(o.samples, "--samples", "estimate");
  Owned<privleak_schema> schema = LoadSchema(o);
  Owned<privleak_samples> samples = LoadSamples(o, schema.get());

  privleak_estimate_options options;
  privleak_estimate_options_init(&options);
  options.method = ParseMethodFlag(o.method);
  options.seed = o.seed;
  options.max_eval_points = o.max_eval;
  options.bandwidths = o.bandwidth.empty() ? nullptr : o.bandwidth.c_str();

  privleak_estimate_result result;
  char* report_raw = nullptr;
  Check(privleak_estimate(samples.get(), &options, &result, &report_raw),
        "estimate");
  ordered_json report = ordered_json::parse(Take(report_raw));
  for (const ordered_json& w : report["warnings"]) {
    if (o.verbose) Warn(w.get<std::string>());
  }
  const double value = privleak_convert_units(result.value_nats, PRIVLEAK_NATS,
                                              Unit(o));
  if (Machine(o)) {
    ordered_json doc = ordered_json::object();
    doc["unit"] = UnitLabel(o);
    doc["mi"] = value;
    for (auto& [key, v] : report.items()) doc[key] = v;
    Emit(o.out, doc.dump() + "\n");
    return kExitOk;
  }
  std::string text = "I(X;S)=" + Fixed(value, 6) + " " + UnitLabel(o) + "\n";
  text += "method=" + report["method"].get<std::string>() + "\n";
  text += "n=" + std::to_string(result.n) + "\n";
  text += "eval_points=" + std::to_string(result.eval_points) + "\n";
  for (const auto& [name, h] : report["bandwidths"].items()) {
    text += "bandwidth[" + name + "]=" + Fixed(h.get<double>(), 6) + "\n";
  }
  const std::string seed =
      result.has_seed ? std::to_string(result.seed) : std::string("none");
  text += "seed=" + seed + "\n";
  Emit(o.out, text);
  return kExitOk;
}

privleak_rule ParseRuleFlag(const std::string& name) {
  if (name == "weighted") return PRIVLEAK_RULE_WEIGHTED;
  if (name == "exposure") return PRIVLEAK_RULE_EXPOSURE;
  return PRIVLEAK_RULE_LINEAR;
}

std::string QuoteText(const privleak_quote& q, const std::string& currency,
                      const std::string& rule, double leakage,
                      const char* unit) {
  return "rule=" + rule + "\nleakage=" + Fixed(leakage, 6) + " " + unit +
         "\nproduction=" + MoneyText(q.production) + " " + currency +
         "\nsurcharge=" + MoneyText(q.surcharge) + " " + currency +
         "\ntotal=" + MoneyText(q.total) + " " + currency + "\n";
}

int RunPrice(const Options& o) {
  Owned<privleak_policy> policy = LoadPolicy(o, "price");
  const privleak_unit lambda_per =
      o.lambda_per == "bit" ? PRIVLEAK_BITS : PRIVLEAK_NATS;
  if (o.lambdas.size() > 1) Invalid("price takes a single --lambda");
  if (o.lambdas.size() == 1) {
    Check(privleak_policy_set_lambda(policy.get(), o.lambdas[0], lambda_per),
          "--lambda");
  }
  if (o.pi_max.size() > 1) Invalid("price takes a single --pi-max");
  if (o.pi_max.size() == 1) {
    Check(privleak_policy_set_pi_max(policy.get(),
                                     ParseMoney(o.pi_max[0], "--pi-max")),
          "--pi-max");
  }

  privleak_quote quote;
  const privleak_rule rule = ParseRuleFlag(o.rule);
  switch (rule) {
    case PRIVLEAK_RULE_LINEAR: {
      if (o.leakage.has_value()) {
        if (!o.table.empty()) Invalid("give --leakage or --table, not both");
        Check(privleak_price_linear(policy.get(), *o.leakage, Unit(o), &quote),
              "price");
      } else {
        Owned<privleak_table> table = LoadTable(o, "price");
        double mi = 0.0;
        Check(privleak_mutual_information(table.get(), PRIVLEAK_NATS, &mi,
                                          nullptr),
              "mi");
        Check(privleak_price_linear(policy.get(), mi, PRIVLEAK_NATS, &quote),
              "price");
      }
      break;
    }
    case PRIVLEAK_RULE_WEIGHTED: {
      if (o.leakage.has_value()) Invalid("weighted pricing needs a table");
      Owned<privleak_table> table = LoadTable(o, "price");
      Check(privleak_price_weighted(policy.get(), table.get(), &quote),
            "price");
      break;
    }
    case PRIVLEAK_RULE_EXPOSURE: {
      if (o.leakage.has_value()) Invalid("exposure pricing needs a table");
      Owned<privleak_table> table = LoadTable(o, "price");
      Check(privleak_price_exposure(policy.get(), table.get(), &quote),
            "price");
      break;
    }
  }

  const double leakage =
      privleak_convert_units(quote.leakage_nats, PRIVLEAK_NATS, Unit(o));
  const std::string currency = Currency(policy.get());
  if (Machine(o)) {
    ordered_json doc = ordered_json::object();
    doc["rule"] = o.rule;
    doc["unit"] = UnitLabel(o);
    doc["leakage"] = leakage;
    doc["currency"] = currency;
    doc["production"] = MoneyText(quote.production);
    doc["surcharge"] = MoneyText(quote.surcharge);
    doc["total"] = MoneyText(quote.total);
    Emit(o.out, doc.dump() + "\n");
  } else {
    Emit(o.out, QuoteText(quote, currency, o.rule, leakage, UnitLabel(o)));
  }
  return kExitOk;
}

int RunCalibrate(const Options& o) {
  if (o.pi_max.size() != 1) Invalid("calibrate requires one --pi-max");
  if (!o.entropy.has_value()) Invalid("calibrate requires --entropy");
  double per_nat = 0.0;
  Check(privleak_calibrate_lambda(ParseMoney(o.pi_max[0], "--pi-max"),
                                  *o.entropy, Unit(o), &per_nat),
        "calibrate");
  const double* rho = o.rate.has_value() ? &*o.rate : nullptr;
  double nat = 0.0;
  double bit = 0.0;
  Check(privleak_convert_lambda(per_nat, PRIVLEAK_NATS, PRIVLEAK_NATS, rho,
                                &nat),
        "calibrate");
  Check(privleak_convert_lambda(per_nat, PRIVLEAK_NATS, PRIVLEAK_BITS, rho,
                                &bit),
        "calibrate");
  if (Machine(o)) {
    ordered_json doc = ordered_json::object();
    doc["lambda_per_nat"] = nat;
    doc["lambda_per_bit"] = bit;
    if (o.rate.has_value()) doc["exchange_rate"] = *o.rate;
    Emit(o.out, doc.dump() + "\n");
  } else {
    Emit(o.out, "lambda=" + Fixed(nat, 4) + " per nat\nlambda=" +
                    Fixed(bit, 4) + " per bit\n");
  }
  return kExitOk;
}

// "curve.csv" + "_lambda2" -> "curve_lambda2.csv"
std::string SuffixPath(const std::string& path, const std::string& suffix) {
  const size_t slash = path.find_last_of('/');
  const size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int RunCurve(const Options& o) {
  Owned<privleak_policy> policy = LoadPolicy(o, "curve");
  const privleak_rule rule = ParseRuleFlag(o.rule);
  const privleak_unit lambda_per =
      o.lambda_per == "bit" ? PRIVLEAK_BITS : PRIVLEAK_NATS;

  double baseline_nats = 0.0;
  if (o.entropy.has_value()) {
    baseline_nats = privleak_convert_units(*o.entropy, Unit(o), PRIVLEAK_NATS);
  }
  double to = 1.0;
  if (o.to.has_value()) {
    to = *o.to;
  } else if (rule == PRIVLEAK_RULE_EXPOSURE && o.entropy.has_value()) {
    to = baseline_nats;
  }

  // One curve per swept parameter value.
  struct Variant {
    std::string suffix;
    std::optional<double> lambda;
    std::optional<std::string> pi_max;
  };
  std::vector<Variant> variants;
  if (rule == PRIVLEAK_RULE_EXPOSURE) {
    if (!o.lambdas.empty()) Invalid("the exposure rule takes --pi-max");
    if (!o.entropy.has_value()) Invalid("the exposure curve needs --entropy");
    for (const std::string& p : o.pi_max) {
      variants.push_back({"_pimax" + p, std::nullopt, p});
    }
  } else {
    if (!o.pi_max.empty()) Invalid("the linear rule takes --lambda");
    for (double l : o.lambdas) {
      variants.push_back({"_lambda" + General(l), l, std::nullopt});
    }
  }
  if (variants.empty()) variants.push_back({"", std::nullopt, std::nullopt});
  if (variants.size() > 1 && o.out.empty()) {
    Invalid("sweeping several values requires --out");
  }

  ordered_json written = ordered_json::array();
  for (const Variant& v : variants) {
    privleak_policy* copy_raw = nullptr;
    char* json_raw = nullptr;
    Check(privleak_policy_to_json(policy.get(), &json_raw), "curve");
    Check(privleak_policy_parse(Take(json_raw).c_str(), &copy_raw), "curve");
    Owned<privleak_policy> copy(copy_raw);
    if (v.lambda.has_value()) {
      Check(privleak_policy_set_lambda(copy.get(), *v.lambda, lambda_per),
            "--lambda");
    }
    if (v.pi_max.has_value()) {
      Check(privleak_policy_set_pi_max(copy.get(),
                                       ParseMoney(*v.pi_max, "--pi-max")),
            "--pi-max");
    }
    char* csv_raw = nullptr;
    Check(privleak_price_curve_csv(copy.get(), rule, o.from, to, o.step,
                                   baseline_nats, &csv_raw),
          "curve");
    const std::string csv = Take(csv_raw);
    if (variants.size() == 1) {
      Emit(o.out, csv);
      if (!o.out.empty()) written.push_back(o.out);
    } else {
      const std::string path = SuffixPath(o.out, v.suffix);
      WriteText(path, csv);
      written.push_back(path);
    }
  }
  if (!o.out.empty()) {
    if (Machine(o)) {
      std::cout << ordered_json{{"files", written}}.dump() << "\n";
    } else {
      for (const auto& path : written) {
        std::cout << "wrote " << path.get<std::string>() << "\n";
      }
    }
  }
  return kExitOk;
}

// FNV-1a over the stream bytes; names sessions whose stream carries no id.
std::string ContentSessionId(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "audit-%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string LedgerReport(const privleak_ledger* ledger, const Options& o) {
  char* raw = nullptr;
  Check(privleak_ledger_report(ledger, Machine(o) ? PRIVLEAK_FORMAT_MACHINE
                                                  : PRIVLEAK_FORMAT_TEXT,
                               &raw),
        "report");
  std::string text = Take(raw);
  if (!text.empty() && text.back() != '\n') text += "\n";
  return text;
}

int RunAudit(const Options& o) {
  Owned<privleak_policy> policy = LoadPolicy(o, "audit");
  Require(o.events, "--events", "audit");
  const std::string session =
      o.session.empty() ? ContentSessionId(ReadText(o.events)) : o.session;
  const std::string timestamp = o.timestamp.empty() ? kEpoch : o.timestamp;

  privleak_ledger* raw = nullptr;
  Check(privleak_audit_stream(policy.get(), o.events.c_str(), session.c_str(),
                              timestamp.c_str(), nullptr, &raw),
        o.events);
  Owned<privleak_ledger> ledger(raw);
  if (!o.ledger.empty()) {
    Check(privleak_ledger_write(ledger.get(), o.ledger.c_str()), o.ledger);
  }
  Emit(o.out, LedgerReport(ledger.get(), o));
  return kExitOk;
}

int RunReport(const Options& o) {
  Require(o.ledger, "--ledger", "report");
  privleak_ledger* raw = nullptr;
  Check(privleak_ledger_load(o.ledger.c_str(), &raw), o.ledger);
  Owned<privleak_ledger> ledger(raw);
  Emit(o.out, LedgerReport(ledger.get(), o));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prices and audits protected-attribute leakage of observable "
               "data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(privleak_version()));

  Options o;
  const std::vector<std::string> units = {"nats", "bits"};
  const std::vector<std::string> formats = {"text", "machine"};

  // Flags shared by every subcommand.
  auto common = [&](CLI::App* sub) {
    sub->add_option("--unit", o.unit, "Information unit")
        ->check(CLI::IsMember(units));
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember(formats));
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_flag("-v,--verbose", o.verbose, "Report warnings on stderr");
  };
  auto inputs = [&](CLI::App* sub) {
    sub->add_option("--schema", o.schema, "Schema JSON file");
    sub->add_option("--samples", o.samples, "Samples CSV file");
    sub->add_option("--table", o.table, "Joint table CSV file");
    sub->add_option("--bins", o.bins,
                    "Binning, e.g. 'x=equal:4;age=quantile:3'");
  };

  CLI::App* entropy = app.add_subcommand("entropy", "Entropies of a table");
  common(entropy);
  inputs(entropy);

  CLI::App* mi = app.add_subcommand("mi", "Mutual information I(X;S)");
  common(mi);
  inputs(mi);
  mi->add_option("--subset", o.subset, "Attribute subset, e.g. 'sex+race'");
  mi->add_flag("--all-subsets", o.all_subsets,
               "Report every attribute subset");

  CLI::App* discretize =
      app.add_subcommand("discretize", "Bin continuous columns");
  common(discretize);
  inputs(discretize);
  discretize->add_option("--schema-out", o.schema_out,
                         "Write the binned schema here");

  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate I(X;S) from samples");
  common(estimate);
  inputs(estimate);
  estimate->add_option("--seed", o.seed, "Random seed");
  estimate->add_option("--method", o.method, "auto, plugin or kde")
      ->check(CLI::IsMember({"auto", "plugin", "kde"}));
  estimate->add_option("--bandwidth", o.bandwidth,
                       "Kernel widths, e.g. 'x=0.3;s=0.2'");
  estimate->add_option("--max-eval", o.max_eval,
                       "Evaluate a seeded subsample of this size");

  const std::vector<std::string> rules = {"linear", "weighted", "exposure"};
  CLI::App* price = app.add_subcommand("price", "Quote a price");
  common(price);
  inputs(price);
  price->add_option("--policy", o.policy, "Pricing policy JSON file");
  price->add_option("--rule", o.rule, "Pricing rule")
      ->check(CLI::IsMember(rules));
  price->add_option("--leakage", o.leakage, "Leakage in --unit");
  price->add_option("--lambda", o.lambdas, "Override the multiplier");
  price->add_option("--lambda-per", o.lambda_per, "Unit --lambda is quoted per")
      ->check(CLI::IsMember({"nat", "bit"}));
  price->add_option("--pi-max", o.pi_max, "Override the maximum penalty");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Multiplier from a maximum penalty");
  common(calibrate);
  calibrate->add_option("--pi-max", o.pi_max, "Maximum penalty")->required();
  calibrate->add_option("--entropy", o.entropy, "Baseline H(S) in --unit")
      ->required();
  calibrate->add_option("--rate", o.rate, "Currency exchange rate");

  CLI::App* curve = app.add_subcommand("curve", "Price against leakage");
  common(curve);
  curve->add_option("--policy", o.policy, "Pricing policy JSON file");
  curve->add_option("--rule", o.rule, "linear or exposure")
      ->check(CLI::IsMember(rules));
  curve->add_option("--lambda", o.lambdas, "Multipliers to sweep");
  curve->add_option("--lambda-per", o.lambda_per, "Unit --lambda is quoted per")
      ->check(CLI::IsMember({"nat", "bit"}));
  curve->add_option("--pi-max", o.pi_max, "Maximum penalties to sweep");
  curve->add_option("--entropy", o.entropy, "Baseline H(S) in --unit");
  curve->add_option("--from", o.from, "First leakage (nats)");
  curve->add_option("--to", o.to, "Last leakage (nats)");
  curve->add_option("--step", o.step, "Leakage step (nats)");

  CLI::App* audit = app.add_subcommand("audit", "Replay a disclosure stream");
  common(audit);
  audit->add_option("--policy", o.policy, "Pricing policy JSON file");
  audit->add_option("--events", o.events, "Event stream (JSON lines)");
  audit->add_option("--ledger", o.ledger, "Write the ledger here");
  audit->add_option("--session", o.session, "Session id");
  audit->add_option("--timestamp", o.timestamp,
                    "Timestamp for records that carry none");

  CLI::App* report = app.add_subcommand("report", "Summarize a ledger file");
  common(report);
  report->add_option("--ledger", o.ledger, "Ledger file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*entropy) return RunEntropy(o);
    if (*mi) return RunMi(o);
    if (*discretize) return RunDiscretize(o);
    if (*estimate) return RunEstimate(o);
    if (*price) return RunPrice(o);
    if (*calibrate) return RunCalibrate(o);
    if (*curve) return RunCurve(o);
    if (*audit) return RunAudit(o);
    if (*report) return RunReport(o);
  } catch (const Failure& f) {
    std::cerr << "privleak: " << f.what() << "\n";
    return f.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "privleak: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
