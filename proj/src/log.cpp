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

#include "qbrach/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace qbrach {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("QB_LOG");
    return env ? std::atoi(env) : 0;
  }();
  return level;
}

void log_message(const std::string& msg) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[qbrach] " << msg << '\n';
}

}  // namespace qbrach
