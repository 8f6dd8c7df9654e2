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

#ifndef PRIVLEAK_CORE_MONEY_H_
#define PRIVLEAK_CORE_MONEY_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"

namespace privleak {

// Exact decimal currency amount with four fractional digits, stored as an
// integer count of 1/10000 units. Sums and differences are exact.
class Money {
 public:
  static constexpr int64_t kScale = 10000;

  constexpr Money() = default;
  static constexpr Money FromMinorUnits(int64_t units) { return Money(units); }

  // Rounds half-to-even at the fourth decimal. Rejects non-finite values
  // and amounts beyond the int64 range.
  static absl::StatusOr<Money> FromDouble(double amount);

  // Accepts "-12", "13600.5", "0.0010". More than four decimals is an error.
  static absl::StatusOr<Money> Parse(absl::string_view text);

  constexpr int64_t minor_units() const { return units_; }
  double ToDouble() const { return static_cast<double>(units_) / kScale; }

  // Always four decimals: "13600.0000".
  std::string ToString() const;

  friend constexpr Money operator+(Money a, Money b) {
    return Money(a.units_ + b.units_);
  }
  friend constexpr Money operator-(Money a, Money b) {
    return Money(a.units_ - b.units_);
  }
  Money& operator+=(Money other) {
    units_ += other.units_;
    return *this;
  }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(int64_t units) : units_(units) {}

  int64_t units_ = 0;
};

}  // namespace privleak

#endif  // PRIVLEAK_CORE_MONEY_H_
