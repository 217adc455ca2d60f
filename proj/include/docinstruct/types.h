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

#ifndef DOCINSTRUCT_TYPES_H_
#define DOCINSTRUCT_TYPES_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docinstruct {

enum class TaskKind {
  kVqa,
  kInfoExtraction,
  kNli,
  kCaptioning,
  kLanguageOnly,
  kGeneralVl,
};

enum class DomainKind {
  kDocument,
  kTable,
  kChart,
  kNaturalImage,
  kWebpage,
  kTextOnly,
};

enum class Split { kTrain, kTest };

// Wire names: "vqa", "ie", "nli", "captioning", "language_only", "general_vl".
std::string_view to_string(TaskKind task);
std::optional<TaskKind> parse_task(std::string_view name);

// Wire names: "document", "table", "chart", "natural_image", "webpage",
// "text_only".
std::string_view to_string(DomainKind domain);
std::optional<DomainKind> parse_domain(std::string_view name);

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view name);

// Lowercase ASCII letters, digits and '-', non-empty.
bool is_valid_dataset_id(std::string_view id);

struct DatasetDescriptor {
  std::string id;
  TaskKind task = TaskKind::kVqa;
  DomainKind domain = DomainKind::kDocument;
  Split split = Split::kTrain;
  std::filesystem::path source_path;

  // Test splits are evaluation-only and never enter a training mixture.
  bool mixture_eligible() const { return split == Split::kTrain; }
};

// Throws Error(kInvalidArgument) on a bad or duplicated id.
void validate_descriptors(const std::vector<DatasetDescriptor>& descriptors);

// The instruction-tuning datasets of the document corpus together with their
// task and scenario. Paths are left empty.
const std::vector<DatasetDescriptor>& document_dataset_catalog();

struct InstructionRecord {
  std::string record_id;
  std::string dataset_id;
  std::string image_ref;
  std::string question;
  std::string answer;
  TaskKind task = TaskKind::kVqa;
  // All gold variants, answer first. Empty means {answer}. Training only
  // ever uses `answer`; metrics score against the full list.
  std::vector<std::string> references;

  bool has_image() const { return !image_ref.empty(); }
  std::vector<std::string> gold_answers() const;
};

// "{dataset_id}:{sample_index}:{sub_index}"
std::string make_record_id(std::string_view dataset_id,
                           std::size_t sample_index, std::size_t sub_index);

// Returns a description of the first violated invariant, if any.
std::optional<std::string> check_record(const InstructionRecord& record);

}  // namespace docinstruct

#endif  // DOCINSTRUCT_TYPES_H_
