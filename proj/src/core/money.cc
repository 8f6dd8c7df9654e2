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

#include "core/money.h"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace privleak {

absl::StatusOr<Money> Money::FromDouble(double amount) {
  if (!std::isfinite(amount)) {
    return absl::InvalidArgumentError("currency amount is not finite");
  }
  // nearbyint honours the default round-to-nearest-even mode.
  const double scaled = std::nearbyint(amount * kScale);
  if (std::abs(scaled) >= 9.2e18) {
    return absl::OutOfRangeError(
        absl::StrCat("currency amount ", amount, " is out of range"));
  }
  return Money(static_cast<int64_t>(scaled));
}

absl::StatusOr<Money> Money::Parse(absl::string_view text) {
  absl::string_view s = absl::StripAsciiWhitespace(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const size_t dot = s.find('.');
  absl::string_view whole = s.substr(0, dot);
  absl::string_view frac =
      dot == absl::string_view::npos ? absl::string_view() : s.substr(dot + 1);
  auto all_digits = [](absl::string_view part) {
    for (char c : part) {
      if (!absl::ascii_isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  if (whole.empty() || !all_digits(whole) || !all_digits(frac) ||
      (dot != absl::string_view::npos && frac.empty())) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", text, "' is not a decimal currency amount"));
  }
  if (frac.size() > 4) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", text, "' has more than four decimal places"));
  }
  int64_t units = 0;
  if (!absl::SimpleAtoi(whole, &units) ||
      units > std::numeric_limits<int64_t>::max() / kScale - 1) {
    return absl::OutOfRangeError(
        absl::StrCat("currency amount '", text, "' is out of range"));
  }
  units *= kScale;
  int64_t scale = kScale / 10;
  for (char c : frac) {
    units += (c - '0') * scale;
    scale /= 10;
  }
  return Money(negative ? -units : units);
}

std::string Money::ToString() const {
  const uint64_t magnitude = units_ < 0
                                 ? static_cast<uint64_t>(-(units_ + 1)) + 1
                                 : static_cast<uint64_t>(units_);
  return absl::StrFormat("%s%d.%04d", units_ < 0 ? "-" : "",
                         magnitude / kScale, magnitude % kScale);
}

}  // namespace privleak
