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

#include "docinstruct/jsonl.h"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "docinstruct/error.h"

namespace docinstruct {

void for_each_json_line(
    const std::filesystem::path& path,
    const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string source = path.string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      throw SchemaError(source, line_no, "", "blank line");
    Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded())
      throw SchemaError(source, line_no, "", "line is not valid JSON");
    if (!obj.is_object())
      throw SchemaError(source, line_no, "", "line is not a JSON object");
    fn(obj, line_no);
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed on " + source);
}

std::string require_string(const Json& obj, std::string_view field,
                           const std::string& source, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw SchemaError(source, line, std::string(field), "missing");
  if (!it->is_string())
    throw SchemaError(source, line, std::string(field), "expected a string");
  return it->get<std::string>();
}

std::vector<std::string> require_string_list(const Json& obj,
                                             std::string_view field,
                                             const std::string& source,
                                             std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw SchemaError(source, line, std::string(field), "missing");
  if (!it->is_array())
    throw SchemaError(source, line, std::string(field), "expected a list");
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string())
      throw SchemaError(source, line, std::string(field),
                        "expected a list of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Json record_to_json(const InstructionRecord& record) {
  Json obj = Json::object();
  obj["record_id"] = record.record_id;
  obj["dataset_id"] = record.dataset_id;
  obj["image"] = record.image_ref;
  obj["question"] = record.question;
  obj["answer"] = record.answer;
  obj["task"] = std::string(to_string(record.task));
  if (record.references.size() > 1) obj["answers"] = record.references;
  return obj;
}

InstructionRecord record_from_json(const Json& obj, const std::string& source,
                                   std::size_t line) {
  InstructionRecord r;
  r.record_id = require_string(obj, "record_id", source, line);
  r.dataset_id = require_string(obj, "dataset_id", source, line);
  r.image_ref = require_string(obj, "image", source, line);
  r.question = require_string(obj, "question", source, line);
  r.answer = require_string(obj, "answer", source, line);
  std::string task = require_string(obj, "task", source, line);
  auto kind = parse_task(task);
  if (!kind) throw SchemaError(source, line, "task", "unknown task '" + task + "'");
  r.task = *kind;
  if (obj.contains("answers")) {
    r.references = require_string_list(obj, "answers", source, line);
    if (r.references.empty())
      throw SchemaError(source, line, "answers", "must not be empty");
  }
  if (auto problem = check_record(r))
    throw SchemaError(source, line, "", *problem);
  return r;
}

std::vector<InstructionRecord> read_records(const std::filesystem::path& path) {
  std::vector<InstructionRecord> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    out.push_back(record_from_json(obj, source, line));
  });
  return out;
}

std::string to_jsonl_line(const Json& obj) {
  std::string line = obj.dump();
  line += '\n';
  return line;
}

void write_records(const std::filesystem::path& path,
                   const std::vector<InstructionRecord>& records) {
  std::string text;
  for (const auto& r : records) text += to_jsonl_line(record_to_json(r));
  write_text_file(path, text);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed on " + path.string());
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error(ErrorCode::kIo, "sha256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

}  // namespace docinstruct
