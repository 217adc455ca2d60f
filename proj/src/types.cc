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

#include "docinstruct/types.h"

#include <set>
#include <sstream>

#include "docinstruct/error.h"
#include "docinstruct/prompt.h"

namespace docinstruct {

namespace {

struct TaskName {
  TaskKind kind;
  std::string_view name;
};

constexpr TaskName kTaskNames[] = {
    {TaskKind::kVqa, "vqa"},
    {TaskKind::kInfoExtraction, "ie"},
    {TaskKind::kNli, "nli"},
    {TaskKind::kCaptioning, "captioning"},
    {TaskKind::kLanguageOnly, "language_only"},
    {TaskKind::kGeneralVl, "general_vl"},
};

struct DomainName {
  DomainKind kind;
  std::string_view name;
};

constexpr DomainName kDomainNames[] = {
    {DomainKind::kDocument, "document"},
    {DomainKind::kTable, "table"},
    {DomainKind::kChart, "chart"},
    {DomainKind::kNaturalImage, "natural_image"},
    {DomainKind::kWebpage, "webpage"},
    {DomainKind::kTextOnly, "text_only"},
};

}  // namespace

std::string_view to_string(TaskKind task) {
  for (const auto& entry : kTaskNames)
    if (entry.kind == task) return entry.name;
  return "unknown";
}

std::optional<TaskKind> parse_task(std::string_view name) {
  for (const auto& entry : kTaskNames)
    if (entry.name == name) return entry.kind;
  return std::nullopt;
}

std::string_view to_string(DomainKind domain) {
  for (const auto& entry : kDomainNames)
    if (entry.kind == domain) return entry.name;
  return "unknown";
}

std::optional<DomainKind> parse_domain(std::string_view name) {
  for (const auto& entry : kDomainNames)
    if (entry.name == name) return entry.kind;
  return std::nullopt;
}

std::string_view to_string(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

bool is_valid_dataset_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok) return false;
  }
  return true;
}

void validate_descriptors(const std::vector<DatasetDescriptor>& descriptors) {
  std::set<std::string_view> seen;
  for (const auto& d : descriptors) {
    if (!is_valid_dataset_id(d.id))
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid dataset id '" + d.id +
                      "' (expected lowercase alphanumerics and '-')");
    if (!seen.insert(d.id).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate dataset id '" + d.id + "'");
  }
}

const std::vector<DatasetDescriptor>& document_dataset_catalog() {
  static const std::vector<DatasetDescriptor> catalog = {
      {"chartqa", TaskKind::kVqa, DomainKind::kChart, Split::kTrain, {}},
      {"docvqa", TaskKind::kVqa, DomainKind::kDocument, Split::kTrain, {}},
      {"infovqa", TaskKind::kVqa, DomainKind::kDocument, Split::kTrain, {}},
      {"wtq", TaskKind::kVqa, DomainKind::kTable, Split::kTrain, {}},
      {"textvqa", TaskKind::kVqa, DomainKind::kNaturalImage, Split::kTrain, {}},
      {"visualmrc", TaskKind::kVqa, DomainKind::kWebpage, Split::kTrain, {}},
      {"deepform", TaskKind::kInfoExtraction, DomainKind::kDocument,
       Split::kTrain, {}},
      {"klc", TaskKind::kInfoExtraction, DomainKind::kDocument, Split::kTrain,
       {}},
      {"tabfact", TaskKind::kNli, DomainKind::kTable, Split::kTrain, {}},
      {"textcaps", TaskKind::kCaptioning, DomainKind::kNaturalImage,
       Split::kTrain, {}},
  };
  return catalog;
}

std::vector<std::string> InstructionRecord::gold_answers() const {
  if (references.empty()) return {answer};
  return references;
}

std::string make_record_id(std::string_view dataset_id,
                           std::size_t sample_index, std::size_t sub_index) {
  std::ostringstream out;
  out << dataset_id << ':' << sample_index << ':' << sub_index;
  return out.str();
}

std::optional<std::string> check_record(const InstructionRecord& record) {
  if (record.record_id.empty()) return "record_id is empty";
  if (record.question.empty()) return "question is empty";
  if (record.answer.empty()) return "answer is empty";
  bool text_only = record.task == TaskKind::kLanguageOnly;
  if (text_only && !record.image_ref.empty())
    return "language-only record must not reference an image";
  if (!text_only && record.image_ref.empty())
    return "image reference is required for task " +
           std::string(to_string(record.task));
  if (contains_prompt_separator(record.question))
    return "question contains the reserved separator ' AI:'";
  if (contains_prompt_separator(record.answer))
    return "answer contains the reserved separator ' AI:'";
  if (!record.references.empty() && record.references.front() != record.answer)
    return "first reference must equal the answer";
  return std::nullopt;
}

}  // namespace docinstruct
