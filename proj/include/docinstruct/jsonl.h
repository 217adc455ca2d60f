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

#ifndef DOCINSTRUCT_JSONL_H_
#define DOCINSTRUCT_JSONL_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "docinstruct/types.h"

namespace docinstruct {

using Json = nlohmann::json;

// Calls `fn(object, line_number)` for every line of a line-delimited JSON
// file. Line numbers are 1-based. Throws Error(kIo) when the file cannot be
// opened and SchemaError when a line is blank, not JSON, or not an object.
void for_each_json_line(
    const std::filesystem::path& path,
    const std::function<void(const Json&, std::size_t)>& fn);

// Typed field accessors for schema validation. All throw SchemaError naming
// the field.
std::string require_string(const Json& obj, std::string_view field,
                           const std::string& source, std::size_t line);
std::vector<std::string> require_string_list(const Json& obj,
                                             std::string_view field,
                                             const std::string& source,
                                             std::size_t line);

// Unified record line:
// {"record_id", "dataset_id", "image", "question", "answer", "task"}
// plus "answers" when more than one gold variant exists.
Json record_to_json(const InstructionRecord& record);
InstructionRecord record_from_json(const Json& obj, const std::string& source,
                                   std::size_t line);

std::vector<InstructionRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path,
                   const std::vector<InstructionRecord>& records);

// One compact JSON document per line, '\n' terminated.
std::string to_jsonl_line(const Json& obj);

void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string sha256_hex(std::string_view bytes);

}  // namespace docinstruct

#endif  // DOCINSTRUCT_JSONL_H_
