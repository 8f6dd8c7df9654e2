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

#include "core/info_units.h"

#include "absl/strings/str_cat.h"

namespace privleak {

double InfoQuantity::nats() const {
  return ConvertUnits(*this, InfoUnit::kNats).value;
}

double InfoQuantity::bits() const {
  return ConvertUnits(*this, InfoUnit::kBits).value;
}

InfoQuantity ConvertUnits(InfoQuantity q, InfoUnit target) {
  if (q.unit == target) return q;
  if (target == InfoUnit::kBits) return {q.value / kLn2, target};
  return {q.value * kLn2, target};
}

absl::string_view UnitName(InfoUnit unit) {
  return unit == InfoUnit::kBits ? "bits" : "nats";
}

absl::StatusOr<InfoUnit> ParseInfoUnit(absl::string_view name) {
  if (name == "nats" || name == "nat") return InfoUnit::kNats;
  if (name == "bits" || name == "bit") return InfoUnit::kBits;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown information unit '", name,
                   "' (expected nats or bits)"));
}

}  // namespace privleak
