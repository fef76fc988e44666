/*
 * Copyright (c) 2026 The atcbf Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Frozen reference artifacts under tests/golden. Set ATCBF_UPDATE_GOLDEN=1
// to rewrite them (then review the diff before committing).

#ifndef ATCBF_TESTS_GOLDEN_HPP
#define ATCBF_TESTS_GOLDEN_HPP

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace golden {

inline std::string path(const std::string& name) { return std::string(ATCBF_SOURCE_DIR) + "/tests/golden/" + name; }

inline bool updating() {
  const char* v = std::getenv("ATCBF_UPDATE_GOLDEN");
  return v && *v && std::string(v) != "0";
}

/// Returns true when `content` equals the stored golden file (or after
/// rewriting it in update mode).
inline bool matches(const std::string& name, const std::string& content) {
  if (updating()) {
    std::ofstream(path(name), std::ios::binary) << content;
    return true;
  }
  std::ifstream in(path(name), std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str() == content;
}

}  // namespace golden

#endif  // ATCBF_TESTS_GOLDEN_HPP
