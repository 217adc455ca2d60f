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

#include "docinstruct/mixer.h"

#include <cstdio>
#include <set>

#include "docinstruct/error.h"
#include "docinstruct/random.h"

namespace docinstruct::mixer {

StageSpec StageSpec::stage_one(std::uint64_t seed) {
  return StageSpec{Stage::kOne, 10, {{std::string(kDocGroup), 1}}, seed};
}

StageSpec StageSpec::stage_two(std::uint64_t seed) {
  return StageSpec{Stage::kTwo,
                   3,
                   {{std::string(kDocGroup), 1},
                    {std::string(kLanguageOnlyGroup), 6},
                    {std::string(kGeneralVlGroup), 6}},
                   seed};
}

MixturePlan build_plan(const StageSpec& spec, const GroupRecords& group_records) {
  if (spec.epochs == 0)
    throw Error(ErrorCode::kInvalidArgument, "epochs must be positive");
  if (spec.groups.empty())
    throw Error(ErrorCode::kInvalidArgument, "stage has no groups");

  std::vector<std::string> canonical;
  std::set<std::string_view> seen;
  for (const auto& group : spec.groups) {
    if (group.upsample_factor == 0)
      throw Error(ErrorCode::kInvalidArgument,
                  "upsample factor of group '" + group.group_id +
                      "' must be positive");
    auto it = group_records.find(group.group_id);
    if (it == group_records.end())
      throw Error(ErrorCode::kMissingGroup,
                  "no records supplied for group '" + group.group_id + "'");
    if (it->second.empty())
      throw Error(ErrorCode::kEmptyGroup,
                  "group '" + group.group_id + "' is empty");
    for (const auto& id : it->second) {
      if (!seen.insert(id).second)
        throw Error(ErrorCode::kInvalidArgument,
                    "record '" + id + "' is listed more than once");
      for (std::uint32_t r = 0; r < group.upsample_factor; ++r)
        canonical.push_back(id);
    }
  }

  MixturePlan plan;
  plan.spec = spec;
  plan.epoch_size = canonical.size();
  plan.epoch_orders.reserve(spec.epochs);
  for (std::uint32_t e = 0; e < spec.epochs; ++e) {
    std::vector<std::string> order = canonical;
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(e)));
    rng.shuffle(std::span<std::string>(order));
    plan.epoch_orders.push_back(std::move(order));
  }
  return plan;
}

std::map<std::string, std::size_t> plan_histogram(const MixturePlan& plan) {
  std::map<std::string, std::size_t> counts;
  for (const auto& epoch : plan.epoch_orders)
    for (const auto& id : epoch) ++counts[id];
  return counts;
}

Json to_json(const MixturePlan& plan) {
  Json groups = Json::array();
  for (const auto& g : plan.spec.groups)
    groups.push_back({{"group", g.group_id}, {"upsample", g.upsample_factor}});
  Json out = Json::object();
  out["stage"] = static_cast<int>(plan.spec.stage);
  out["seed"] = plan.spec.seed;
  out["epochs"] = plan.spec.epochs;
  out["groups"] = std::move(groups);
  out["epoch_size"] = plan.epoch_size;
  out["epoch_orders"] = plan.epoch_orders;
  return out;
}

void check_train_only(const std::vector<InstructionRecord>& records,
                      const std::vector<DatasetDescriptor>& registry) {
  std::set<std::string_view> test_sets;
  for (const auto& d : registry)
    if (!d.mixture_eligible()) test_sets.insert(d.id);
  for (const auto& r : records) {
    if (test_sets.contains(r.dataset_id))
      throw Error(ErrorCode::kInvalidArgument,
                  "record '" + r.record_id + "' comes from test split '" +
                      r.dataset_id + "' and cannot enter a training mixture");
  }
}

ShardManifest emit_shards(
    const MixturePlan& plan,
    const std::unordered_map<std::string, InstructionRecord>& records_by_id,
    std::size_t shard_size, const std::filesystem::path& out_dir) {
  if (shard_size == 0)
    throw Error(ErrorCode::kInvalidArgument, "shard size must be at least 1");

  std::vector<const InstructionRecord*> sequence;
  sequence.reserve(plan.total());
  for (const auto& epoch : plan.epoch_orders) {
    for (const auto& id : epoch) {
      auto it = records_by_id.find(id);
      if (it == records_by_id.end())
        throw Error(ErrorCode::kUnresolvedRecordId,
                    "plan references unknown record '" + id + "'");
      sequence.push_back(&it->second);
    }
  }

  ShardManifest manifest;
  manifest.stage = static_cast<int>(plan.spec.stage);
  manifest.seed = plan.spec.seed;
  manifest.epochs = plan.spec.epochs;

  std::size_t n_shards = (sequence.size() + shard_size - 1) / shard_size;
  for (std::size_t s = 0; s < n_shards; ++s) {
    std::size_t begin = s * shard_size;
    std::size_t end = std::min(sequence.size(), begin + shard_size);
    std::string text;
    for (std::size_t i = begin; i < end; ++i)
      text += to_jsonl_line(record_to_json(*sequence[i]));

    char name[48];
    std::snprintf(name, sizeof(name), "shard-%05zu.jsonl", s);
    write_text_file(out_dir / name, text);
    manifest.shards.push_back({name, end - begin, sha256_hex(text)});
  }
  write_text_file(out_dir / kManifestFile, to_json(manifest).dump(2) + "\n");
  return manifest;
}

Json to_json(const ShardManifest& manifest) {
  Json shards = Json::array();
  for (const auto& s : manifest.shards)
    shards.push_back({{"file", s.file}, {"count", s.count}, {"sha256", s.sha256}});
  Json out = Json::object();
  out["stage"] = manifest.stage;
  out["seed"] = manifest.seed;
  out["epochs"] = manifest.epochs;
  out["shards"] = std::move(shards);
  return out;
}

ShardManifest manifest_from_json(const Json& obj) {
  ShardManifest m;
  try {
    m.stage = obj.at("stage").get<int>();
    m.seed = obj.at("seed").get<std::uint64_t>();
    m.epochs = obj.at("epochs").get<std::uint32_t>();
    for (const auto& s : obj.at("shards")) {
      m.shards.push_back({s.at("file").get<std::string>(),
                          s.at("count").get<std::size_t>(),
                          s.at("sha256").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("bad manifest: ") + e.what());
  }
  return m;
}

}  // namespace docinstruct::mixer
