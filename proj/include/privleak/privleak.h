/* Copyright 2026 The Privleak Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the privleak library.
 *
 * Every object is an opaque handle released by its matching *_free
 * function. Functions return a privleak_status; on failure a description
 * of the most recent error on the calling thread is available from
 * privleak_last_error(). Strings returned through char** out-parameters
 * are owned by the caller and released with privleak_string_free().
 *
 * Information quantities are doubles tagged with a privleak_unit. Money
 * crosses the boundary as int64 minor units of 1/10000 of the currency.
 */
#ifndef PRIVLEAK_PRIVLEAK_H_
#define PRIVLEAK_PRIVLEAK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PRIVLEAK_BUILDING_LIBRARY)
#define PRIVLEAK_API __declspec(dllexport)
#else
#define PRIVLEAK_API __declspec(dllimport)
#endif
#else
#define PRIVLEAK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum privleak_status {
  PRIVLEAK_OK = 0,
  PRIVLEAK_ERROR_IO = 1,         /* file missing or unwritable */
  PRIVLEAK_ERROR_PARSE = 2,      /* malformed document */
  PRIVLEAK_ERROR_VALIDATION = 3, /* well-formed input violating a contract */
  PRIVLEAK_ERROR_DOMAIN = 4,     /* state or precondition failure */
  PRIVLEAK_ERROR_INTERNAL = 5
} privleak_status;

typedef enum privleak_unit {
  PRIVLEAK_NATS = 0,
  PRIVLEAK_BITS = 1
} privleak_unit;

typedef enum privleak_rule {
  PRIVLEAK_RULE_LINEAR = 0,
  PRIVLEAK_RULE_WEIGHTED = 1,
  PRIVLEAK_RULE_EXPOSURE = 2
} privleak_rule;

typedef enum privleak_method {
  PRIVLEAK_METHOD_AUTO = 0,
  PRIVLEAK_METHOD_PLUGIN = 1,
  PRIVLEAK_METHOD_KDE = 2
} privleak_method;

typedef enum privleak_consent {
  PRIVLEAK_CONSENT_PENDING = 0,
  PRIVLEAK_CONSENT_GRANTED = 1,
  PRIVLEAK_CONSENT_DENIED = 2
} privleak_consent;

typedef enum privleak_format {
  PRIVLEAK_FORMAT_TEXT = 0,
  PRIVLEAK_FORMAT_MACHINE = 1 /* JSON, full precision */
} privleak_format;

#define PRIVLEAK_MONEY_SCALE 10000

typedef struct privleak_schema privleak_schema;
typedef struct privleak_samples privleak_samples;
typedef struct privleak_table privleak_table;
typedef struct privleak_policy privleak_policy;
typedef struct privleak_ledger privleak_ledger;

PRIVLEAK_API const char* privleak_version(void);
PRIVLEAK_API const char* privleak_last_error(void);
PRIVLEAK_API void privleak_string_free(char* s);

/* Formats minor units as a decimal with four places into buf. Returns the
 * length written (excluding the terminator), or the required length when
 * buf is too small. */
PRIVLEAK_API size_t privleak_money_format(int64_t minor_units, char* buf,
                                          size_t buf_len);
/* Converts a decimal string with at most four places to minor units. */
PRIVLEAK_API privleak_status privleak_money_parse(const char* text,
                                                  int64_t* minor_units);

/* ---- schema and samples ---------------------------------------------- */

PRIVLEAK_API privleak_status privleak_schema_load(const char* path,
                                                  privleak_schema** out);
PRIVLEAK_API privleak_status privleak_schema_parse(const char* json,
                                                   privleak_schema** out);
PRIVLEAK_API void privleak_schema_free(privleak_schema* schema);
PRIVLEAK_API size_t privleak_schema_attribute_count(const privleak_schema* s);
/* Newline-separated joint labels, first attribute varying slowest. */
PRIVLEAK_API privleak_status privleak_schema_intersection_labels(
    const privleak_schema* schema, char** out);
PRIVLEAK_API privleak_status privleak_schema_to_json(
    const privleak_schema* schema, char** out);

PRIVLEAK_API privleak_status privleak_samples_load(
    const privleak_schema* schema, const char* path, privleak_samples** out);
PRIVLEAK_API privleak_status privleak_samples_parse(
    const privleak_schema* schema, const char* csv, privleak_samples** out);
PRIVLEAK_API void privleak_samples_free(privleak_samples* samples);
PRIVLEAK_API size_t privleak_samples_count(const privleak_samples* samples);
PRIVLEAK_API int privleak_samples_all_categorical(
    const privleak_samples* samples);
/* binning_spec: "attr=equal:4;attr2=quantile:3;attr3=cuts:0.3,0.6".
 * cuts_json (optional) receives {"attr": [cut, ...], ...}. */
PRIVLEAK_API privleak_status privleak_samples_discretize(
    const privleak_samples* samples, const char* binning_spec,
    privleak_samples** out, char** cuts_json);
PRIVLEAK_API privleak_status privleak_samples_to_csv(
    const privleak_samples* samples, char** out);
PRIVLEAK_API privleak_status privleak_samples_schema_json(
    const privleak_samples* samples, char** out);

/* ---- joint tables and information measures ---------------------------- */

PRIVLEAK_API privleak_status privleak_table_load(const char* path,
                                                 privleak_table** out);
PRIVLEAK_API privleak_status privleak_table_parse(const char* csv,
                                                  privleak_table** out);
/* probabilities: rows x cols, row-major; rows index X, cols index S. */
PRIVLEAK_API privleak_status privleak_table_create(
    size_t rows, size_t cols, const double* probabilities,
    const char* const* x_labels, const char* const* s_labels,
    privleak_table** out);
/* Plug-in table from all-categorical samples (already factored). */
PRIVLEAK_API privleak_status privleak_table_from_samples(
    const privleak_samples* samples, privleak_table** out);
/* Decomposes "a|b|c" column labels against the schema. */
PRIVLEAK_API privleak_status privleak_table_attach_schema(
    privleak_table* table, const privleak_schema* schema);
PRIVLEAK_API void privleak_table_free(privleak_table* table);
PRIVLEAK_API size_t privleak_table_warning_count(const privleak_table* t);
PRIVLEAK_API const char* privleak_table_warning(const privleak_table* t,
                                                size_t index);

typedef struct privleak_entropies {
  double h_s;         /* H(S) */
  double h_x;         /* H(X) */
  double h_s_given_x; /* H(S|X) */
  double h_xs;        /* H(X,S) */
} privleak_entropies;

PRIVLEAK_API privleak_status privleak_entropy(const double* dist, size_t n,
                                              privleak_unit unit, double* out);
PRIVLEAK_API privleak_status privleak_table_entropies(
    const privleak_table* table, privleak_unit unit, privleak_entropies* out);
/* clamped (optional) is set to 1 when a tiny negative was clamped to 0. */
PRIVLEAK_API privleak_status privleak_mutual_information(
    const privleak_table* table, privleak_unit unit, double* out,
    int* clamped);
PRIVLEAK_API privleak_status privleak_exposure_ratio(
    const privleak_table* table, double* out);
/* subset_key: attribute names joined by '+', e.g. "sex+disability". */
PRIVLEAK_API privleak_status privleak_marginal_mi(
    const privleak_table* table, const char* subset_key, privleak_unit unit,
    double* out);
/* {"unit": "...", "entries": [{"subset": "sex", "value": ...}, ...]} */
PRIVLEAK_API privleak_status privleak_leakage_report_json(
    const privleak_table* table, privleak_unit unit, char** out);
PRIVLEAK_API double privleak_convert_units(double value, privleak_unit from,
                                           privleak_unit to);

/* ---- estimation -------------------------------------------------------- */

typedef struct privleak_estimate_options {
  privleak_method method;
  uint64_t seed;
  size_t max_eval_points;  /* 0 = evaluate every sample */
  const char* bandwidths;  /* "attr=h;..." overrides, or NULL */
} privleak_estimate_options;

typedef struct privleak_estimate_result {
  double value_nats; /* clamped at 0 */
  double raw_nats;
  size_t n;
  size_t eval_points;
  privleak_method method;
  int has_seed;
  uint64_t seed;
} privleak_estimate_result;

PRIVLEAK_API void privleak_estimate_options_init(
    privleak_estimate_options* options);
PRIVLEAK_API privleak_status privleak_silverman_bandwidth(const double* values,
                                                          size_t n,
                                                          double* out);
/* report_json (optional) receives method, n, bandwidths, seed, warnings. */
PRIVLEAK_API privleak_status privleak_estimate(
    const privleak_samples* samples, const privleak_estimate_options* options,
    privleak_estimate_result* out, char** report_json);

/* ---- pricing ----------------------------------------------------------- */

typedef struct privleak_quote {
  int64_t total;
  int64_t production;
  int64_t surcharge;
  double leakage_nats;
  privleak_rule rule;
} privleak_quote;

PRIVLEAK_API privleak_status privleak_policy_load(const char* path,
                                                  privleak_policy** out);
PRIVLEAK_API privleak_status privleak_policy_parse(const char* json,
                                                   privleak_policy** out);
PRIVLEAK_API void privleak_policy_free(privleak_policy* policy);
PRIVLEAK_API privleak_status privleak_policy_to_json(
    const privleak_policy* policy, char** out);
/* Length of the currency code; copies it into buf when it fits. */
PRIVLEAK_API size_t privleak_policy_currency(const privleak_policy* policy,
                                             char* buf, size_t buf_len);
/* Replaces the multiplier(s) with a scalar lambda quoted per `per`. */
PRIVLEAK_API privleak_status privleak_policy_set_lambda(
    privleak_policy* policy, double lambda, privleak_unit per);
PRIVLEAK_API privleak_status privleak_policy_set_pi_max(
    privleak_policy* policy, int64_t pi_max_minor_units);

PRIVLEAK_API privleak_status privleak_price_linear(
    const privleak_policy* policy, double leakage, privleak_unit unit,
    privleak_quote* out);
/* The table must have a schema attached. */
PRIVLEAK_API privleak_status privleak_price_weighted(
    const privleak_policy* policy, const privleak_table* table,
    privleak_quote* out);
PRIVLEAK_API privleak_status privleak_price_exposure(
    const privleak_policy* policy, const privleak_table* table,
    privleak_quote* out);
PRIVLEAK_API privleak_status privleak_calibrate_lambda(
    int64_t pi_max_minor_units, double baseline_entropy, privleak_unit unit,
    double* lambda_per_nat);
/* exchange_rate may be NULL for no currency conversion. */
PRIVLEAK_API privleak_status privleak_convert_lambda(
    double lambda, privleak_unit from_per, privleak_unit to_per,
    const double* exchange_rate, double* out);
/* CSV with header "leakage,value". baseline_entropy_nats is used by the
 * exposure rule only. */
PRIVLEAK_API privleak_status privleak_price_curve_csv(
    const privleak_policy* policy, privleak_rule rule, double from, double to,
    double step, double baseline_entropy_nats, char** out);

/* ---- audit ledger ------------------------------------------------------ */

typedef struct privleak_ledger_totals {
  size_t events;
  double leakage_nats;
  int64_t surcharge;
  int64_t production;
  int64_t grand_total;
  privleak_consent consent;
} privleak_ledger_totals;

/* session_id, opened_at and journal_path may be NULL. With a journal path
 * every record is appended to that file as it happens. */
PRIVLEAK_API privleak_status privleak_ledger_open(
    const privleak_policy* policy, const char* session_id,
    const char* opened_at, const char* journal_path, privleak_ledger** out);
PRIVLEAK_API privleak_status privleak_ledger_record(
    privleak_ledger* ledger, const char* observable, double leakage,
    privleak_unit unit, const char* timestamp);
PRIVLEAK_API privleak_status privleak_ledger_close(privleak_ledger* ledger,
                                                   privleak_consent decision,
                                                   const char* timestamp);
PRIVLEAK_API privleak_status privleak_ledger_totals_get(
    const privleak_ledger* ledger, privleak_ledger_totals* out);
PRIVLEAK_API privleak_status privleak_ledger_report(
    const privleak_ledger* ledger, privleak_format format, char** out);
PRIVLEAK_API privleak_status privleak_ledger_write(
    const privleak_ledger* ledger, const char* path);
PRIVLEAK_API privleak_status privleak_ledger_load(const char* path,
                                                  privleak_ledger** out);
/* Replays a JSON-lines event stream file. A session header line in the
 * stream takes precedence over session_id. When fallback_timestamp is set
 * it stamps the opening and any event without its own timestamp, which
 * makes the replay independent of the wall clock. Any of the three
 * strings may be NULL. */
PRIVLEAK_API privleak_status privleak_audit_stream(
    const privleak_policy* policy, const char* stream_path,
    const char* session_id, const char* fallback_timestamp,
    const char* journal_path, privleak_ledger** out);
PRIVLEAK_API void privleak_ledger_free(privleak_ledger* ledger);

#ifdef __cplusplus
}
#endif

#endif /* PRIVLEAK_PRIVLEAK_H_ */
