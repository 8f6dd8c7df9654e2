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

#ifndef PRIVLEAK_CORE_CSV_H_
#define PRIVLEAK_CORE_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"

namespace privleak {

using CsvRow = std::vector<std::string>;

// Parses comma-delimited text with an optional UTF-8 BOM. Fields may be
// double-quoted; a doubled quote inside a quoted field is a literal quote.
// Blank lines are skipped. Returns a DataLoss error for malformed quoting.
absl::StatusOr<std::vector<CsvRow>> ParseCsv(absl::string_view text);

// Quotes a field only when it contains a comma, quote, or newline.
std::string CsvEscape(absl::string_view field);

// Whole-file helpers. A missing file is NotFound.
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_CSV_H_
