// Copyright 2026 The qbrach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

namespace qbrach {

/// Verbosity from the QB_LOG environment variable (0 when unset).
int log_level();

/// Writes "[qbrach] msg" to stderr.
void log_message(const std::string& msg);

}  // namespace qbrach

#define QB_LOG(level, msg)                                    \
  do {                                                        \
    if (::qbrach::log_level() >= (level)) ::qbrach::log_message(msg); \
  } while (0)
