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

#ifndef DOCINSTRUCT_INGEST_H_
#define DOCINSTRUCT_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "docinstruct/jsonl.h"
#include "docinstruct/types.h"

namespace docinstruct::ingest {

// {"image": str, "question": str, "answers": [str, ...]}
struct RawVqaSample {
  std::string image_ref;
  std::string question;
  std::vector<std::string> answers;  // answers[0] is the training answer
};

// {"image": str, "pairs": {str: str}, "key_universe": [str, ...]}
struct RawIeSample {
  std::string image_ref;
  std::map<std::string, std::string> pairs;
  std::vector<std::string> key_universe;
};

enum class NliLabel { kEntailed, kRefuted };

// {"image": str, "statement": str, "label": "Entailed"|"Refuted"}
struct RawNliSample {
  std::string image_ref;
  std::string statement;
  NliLabel label = NliLabel::kEntailed;
};

// {"image": str, "captions": [str, ...]}
struct RawCaptionSample {
  std::string image_ref;
  std::vector<std::string> captions;
};

// Language-only and general vision-language corpora arrive pre-unified:
// {"image": str|"", "question": str, "answer": str}
struct RawUnifiedSample {
  std::string image_ref;
  std::string question;
  std::string answer;
};

using RawDataset =
    std::variant<std::vector<RawVqaSample>, std::vector<RawIeSample>,
                 std::vector<RawNliSample>, std::vector<RawCaptionSample>,
                 std::vector<RawUnifiedSample>>;

std::vector<RawVqaSample> load_vqa(const std::filesystem::path& path);
std::vector<RawIeSample> load_ie(const std::filesystem::path& path);
std::vector<RawNliSample> load_nli(const std::filesystem::path& path);
std::vector<RawCaptionSample> load_captions(const std::filesystem::path& path);
// `task` must be kLanguageOnly or kGeneralVl; it decides whether an image is
// forbidden or required.
std::vector<RawUnifiedSample> load_unified(const std::filesystem::path& path,
                                           TaskKind task);

// Dispatches on descriptor.task. Samples come back in file order; any
// malformed line raises SchemaError with its line number.
RawDataset load_dataset(const DatasetDescriptor& descriptor);

std::size_t sample_count(const RawDataset& dataset);

// Image references of `dataset` that do not exist under `image_root`.
std::vector<std::string> find_missing_images(
    const RawDataset& dataset, const std::filesystem::path& image_root);

// Registry file: a JSON array of
// {"id", "task", "domain", "split", "path"}; relative paths resolve against
// the registry's directory.
std::vector<DatasetDescriptor> load_registry(const std::filesystem::path& path);

struct GroupCount {
  std::size_t datasets = 0;
  std::size_t samples = 0;
};

struct DatasetCount {
  std::string id;
  TaskKind task;
  DomainKind domain;
  std::size_t samples = 0;
};

struct CompositionReport {
  std::vector<DatasetCount> datasets;
  std::map<TaskKind, GroupCount> by_task;
  std::map<DomainKind, GroupCount> by_domain;
  std::size_t total_samples = 0;
};

CompositionReport composition_report(
    const std::vector<DatasetDescriptor>& descriptors);

Json to_json(const CompositionReport& report);

}  // namespace docinstruct::ingest

#endif  // DOCINSTRUCT_INGEST_H_
