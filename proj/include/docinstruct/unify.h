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

#ifndef DOCINSTRUCT_UNIFY_H_
#define DOCINSTRUCT_UNIFY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docinstruct/ingest.h"
#include "docinstruct/types.h"

namespace docinstruct::unify {

inline constexpr std::string_view kMissingValueAnswer = "None";
inline constexpr std::string_view kNliSuffix = ", Yes or No?";

// Caption-soliciting instructions. The prompt for a record is a pure function
// of (seed, record_index).
class PromptPool {
 public:
  PromptPool(std::vector<std::string> prompts, std::uint64_t seed);

  // Ten neutral caption instructions.
  static PromptPool defaults(std::uint64_t seed);
  // One prompt per non-empty line.
  static PromptPool load(const std::filesystem::path& path, std::uint64_t seed);

  const std::string& choose(std::size_t record_index) const;

  const std::vector<std::string>& prompts() const { return prompts_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<std::string> prompts_;
  std::uint64_t seed_;
};

// "What is the value for the {key}?"
std::string ie_question(std::string_view key);

InstructionRecord unify_vqa(const ingest::RawVqaSample& sample,
                            std::string_view dataset_id,
                            std::size_t sample_index);

// One record per key of the universe (include_missing) or per present key,
// in key-universe order. Absent keys answer "None". The sub-index of every
// record is the key's position in the universe.
std::vector<InstructionRecord> unify_ie(const ingest::RawIeSample& sample,
                                        std::string_view dataset_id,
                                        std::size_t sample_index,
                                        bool include_missing);

// Same, but keeps at most `max_missing` absent keys per sample, chosen by a
// draw keyed on (seed, dataset_id, sample_index).
struct MissingKeyCap {
  std::size_t max_missing = 4;
  std::uint64_t seed = 0;
};

std::vector<InstructionRecord> unify_ie(const ingest::RawIeSample& sample,
                                        std::string_view dataset_id,
                                        std::size_t sample_index,
                                        bool include_missing,
                                        const MissingKeyCap& cap);

InstructionRecord unify_nli(const ingest::RawNliSample& sample,
                            std::string_view dataset_id,
                            std::size_t sample_index);

InstructionRecord unify_caption(const ingest::RawCaptionSample& sample,
                                std::string_view dataset_id,
                                const PromptPool& pool,
                                std::size_t record_index);

InstructionRecord unify_passthrough(const ingest::RawUnifiedSample& sample,
                                    std::string_view dataset_id,
                                    std::size_t sample_index, TaskKind task);

struct UnifyOptions {
  bool include_missing = true;
  // nullopt keeps every absent key.
  std::optional<std::size_t> missing_key_cap = 4;
  std::uint64_t seed = 0;
  // Defaults to PromptPool::defaults(seed).
  std::optional<std::vector<std::string>> caption_prompts;
};

std::vector<InstructionRecord> unify_dataset(const ingest::RawDataset& dataset,
                                             const DatasetDescriptor& descriptor,
                                             const UnifyOptions& options);

}  // namespace docinstruct::unify

#endif  // DOCINSTRUCT_UNIFY_H_
