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

#ifndef DOCINSTRUCT_METRICS_LEVENSHTEIN_H_
#define DOCINSTRUCT_METRICS_LEVENSHTEIN_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace docinstruct::metrics {

// Decodes UTF-8 into code points. Bytes that do not form a valid sequence are
// mapped one-to-one into U+DC80..U+DCFF so that distinct inputs stay distinct.
std::u32string decode_utf8(std::string_view text);

// Unit-cost insert/delete/substitute distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace docinstruct::metrics

#endif  // DOCINSTRUCT_METRICS_LEVENSHTEIN_H_
