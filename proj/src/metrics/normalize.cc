// Copyright 2026 The DocInstruct Authors. All Rights Reserved.
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

#include "docinstruct/metrics/normalize.h"

namespace docinstruct::metrics {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool is_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

}  // namespace

std::string normalize(std::string_view text, const NormalizationPolicy& policy) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (policy.lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (policy.strip_punctuation && is_punct(c)) continue;
    if (policy.collapse_inner_whitespace && is_space(c)) {
      if (!in_space) out += ' ';
      in_space = true;
      continue;
    }
    in_space = false;
    out += c;
  }
  if (policy.strip_outer_whitespace) {
    std::size_t begin = 0;
    while (begin < out.size() && is_space(out[begin])) ++begin;
    std::size_t end = out.size();
    while (end > begin && is_space(out[end - 1])) --end;
    out = out.substr(begin, end - begin);
  }
  return out;
}

}  // namespace docinstruct::metrics
