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

#ifndef PRIVLEAK_CORE_STATUS_MACROS_H_
#define PRIVLEAK_CORE_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PRIVLEAK_CONCAT_INNER(a, b) a##b
#define PRIVLEAK_CONCAT(a, b) PRIVLEAK_CONCAT_INNER(a, b)

#define PRIVLEAK_RETURN_IF_ERROR(expr)         \
  do {                                         \
    absl::Status privleak_status_ = (expr);    \
    if (!privleak_status_.ok()) {              \
      return privleak_status_;                 \
    }                                          \
  } while (0)

#define PRIVLEAK_ASSIGN_OR_RETURN_IMPL(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                   \
  if (!tmp.ok()) {                                      \
    return tmp.status();                                \
  }                                                     \
  lhs = std::move(tmp).value()

#define PRIVLEAK_ASSIGN_OR_RETURN(lhs, rexpr) \
  PRIVLEAK_ASSIGN_OR_RETURN_IMPL(             \
      PRIVLEAK_CONCAT(privleak_statusor_, __LINE__), lhs, rexpr)

#endif  // PRIVLEAK_CORE_STATUS_MACROS_H_
