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

#ifndef PRIVLEAK_CORE_INFO_UNITS_H_
#define PRIVLEAK_CORE_INFO_UNITS_H_

#include <numbers>
#include <string_view>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"

namespace privleak {

// Natural log is the internal unit everywhere; bits exist for display and
// for policies quoted per bit.
enum class InfoUnit { kNats, kBits };

inline constexpr double kLn2 = std::numbers::ln2;

struct InfoQuantity {
  double value = 0.0;
  InfoUnit unit = InfoUnit::kNats;

  double nats() const;
  double bits() const;
};

// nats -> bits divides by ln 2, bits -> nats multiplies by ln 2. Same-unit
// conversion returns the input untouched.
InfoQuantity ConvertUnits(InfoQuantity q, InfoUnit target);

inline InfoQuantity Nats(double v) { return {v, InfoUnit::kNats}; }
inline InfoQuantity Bits(double v) { return {v, InfoUnit::kBits}; }

absl::string_view UnitName(InfoUnit unit);
absl::StatusOr<InfoUnit> ParseInfoUnit(absl::string_view name);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_INFO_UNITS_H_
