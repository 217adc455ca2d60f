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

#ifndef DOCINSTRUCT_MIXER_H_
#define DOCINSTRUCT_MIXER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "docinstruct/jsonl.h"
#include "docinstruct/types.h"

namespace docinstruct::mixer {

inline constexpr std::string_view kDocGroup = "doc";
inline constexpr std::string_view kLanguageOnlyGroup = "language_only";
inline constexpr std::string_view kGeneralVlGroup = "general_vl";

enum class Stage { kOne = 1, kTwo = 2 };

struct GroupSpec {
  std::string group_id;
  std::uint32_t upsample_factor = 1;
};

struct StageSpec {
  Stage stage = Stage::kOne;
  std::uint32_t epochs = 1;
  std::vector<GroupSpec> groups;
  std::uint64_t seed = 0;

  // Document data only, 10 epochs.
  static StageSpec stage_one(std::uint64_t seed);
  // Document data plus language-only and general vision-language data, each
  // replicated 6 times per epoch, 3 epochs.
  static StageSpec stage_two(std::uint64_t seed);
};

// Every epoch is a permutation of the same multiset: each record of group g
// appears upsample_factor(g) times. Epoch e is shuffled by a stream derived
// from (seed, e).
struct MixturePlan {
  StageSpec spec;
  std::size_t epoch_size = 0;
  std::vector<std::vector<std::string>> epoch_orders;

  std::size_t total() const { return epoch_size * epoch_orders.size(); }
};

using GroupRecords = std::map<std::string, std::vector<std::string>>;

// Throws Error(kMissingGroup) / Error(kEmptyGroup) when a group named by the
// spec is absent or has no records, and Error(kInvalidArgument) for zero
// epochs or factors or a record id listed twice.
MixturePlan build_plan(const StageSpec& spec, const GroupRecords& group_records);

std::map<std::string, std::size_t> plan_histogram(const MixturePlan& plan);

Json to_json(const MixturePlan& plan);

// Throws Error(kInvalidArgument) if any record belongs to a dataset that the
// registry marks as a test split.
void check_train_only(const std::vector<InstructionRecord>& records,
                      const std::vector<DatasetDescriptor>& registry);

struct ShardInfo {
  std::string file;
  std::size_t count = 0;
  std::string sha256;
};

struct ShardManifest {
  int stage = 1;
  std::uint64_t seed = 0;
  std::uint32_t epochs = 0;
  std::vector<ShardInfo> shards;
};

inline constexpr std::string_view kManifestFile = "manifest.json";

// Writes shard-NNNNN.jsonl files of at most shard_size unified records each,
// in plan order across all epochs, plus manifest.json. Nothing is written if
// a plan id cannot be resolved (Error(kUnresolvedRecordId)).
ShardManifest emit_shards(
    const MixturePlan& plan,
    const std::unordered_map<std::string, InstructionRecord>& records_by_id,
    std::size_t shard_size, const std::filesystem::path& out_dir);

Json to_json(const ShardManifest& manifest);
ShardManifest manifest_from_json(const Json& obj);

}  // namespace docinstruct::mixer

#endif  // DOCINSTRUCT_MIXER_H_
