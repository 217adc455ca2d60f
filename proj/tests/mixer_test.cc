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

#include <gtest/gtest.h>

#include "docinstruct/error.h"
#include "docinstruct/jsonl.h"
#include "docinstruct/mixer.h"
#include "docinstruct/random.h"
#include "support/fixtures.h"

namespace docinstruct {
namespace {

using mixer::GroupRecords;
using mixer::StageSpec;
using testing::TempDir;

std::vector<std::string> ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + ":" + std::to_string(i) + ":0");
  return out;
}

GroupRecords stage_two_groups(std::size_t doc, std::size_t lang, std::size_t vl) {
  return {{"doc", ids("doc", doc)},
          {"language_only", ids("lang", lang)},
          {"general_vl", ids("vl", vl)}};
}

TEST(Mixer, StageTwoArithmetic) {
  auto plan = mixer::build_plan(StageSpec::stage_two(7), stage_two_groups(100, 10, 20));
  EXPECT_EQ(plan.epoch_size, 280u);
  EXPECT_EQ(plan.total(), 840u);
  ASSERT_EQ(plan.epoch_orders.size(), 3u);
}

TEST(Mixer, StageOneArithmetic) {
  auto plan = mixer::build_plan(StageSpec::stage_one(7), {{"doc", ids("doc", 50)}});
  EXPECT_EQ(plan.epoch_size, 50u);
  EXPECT_EQ(plan.total(), 500u);
}

TEST(Mixer, StageOneIgnoresExtraGroups) {
  auto plan = mixer::build_plan(StageSpec::stage_one(1), stage_two_groups(5, 3, 3));
  EXPECT_EQ(plan.total(), 50u);
}

// Over random group sizes and seeds: each record appears exactly
// factor times per epoch and epochs * factor times overall.
TEST(Mixer, HistogramProperty) {
  Rng gen(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t d = 1 + gen.below(30), l = 1 + gen.below(10), v = 1 + gen.below(10);
    auto groups = stage_two_groups(d, l, v);
    auto plan = mixer::build_plan(StageSpec::stage_two(gen.next()), groups);
    ASSERT_EQ(plan.epoch_size, d + 6 * l + 6 * v);
    for (const auto& epoch : plan.epoch_orders) {
      std::map<std::string, std::size_t> per_epoch;
      for (const auto& id : epoch) ++per_epoch[id];
      for (const auto& [id, n] : per_epoch) ASSERT_EQ(n, id.starts_with("doc") ? 1u : 6u);
    }
    for (const auto& [id, n] : mixer::plan_histogram(plan))
      ASSERT_EQ(n, id.starts_with("doc") ? 3u : 18u) << id;
    ASSERT_EQ(mixer::plan_histogram(plan).size(), d + l + v);
  }
}

TEST(Mixer, DeterministicPerSeedAndSensitiveToIt) {
  auto groups = stage_two_groups(30, 5, 5);
  auto a = mixer::to_json(mixer::build_plan(StageSpec::stage_two(7), groups)).dump();
  auto b = mixer::to_json(mixer::build_plan(StageSpec::stage_two(7), groups)).dump();
  auto c = mixer::to_json(mixer::build_plan(StageSpec::stage_two(8), groups)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Mixer, EpochsAreShuffledIndependently) {
  auto plan = mixer::build_plan(StageSpec::stage_one(3), {{"doc", ids("doc", 40)}});
  EXPECT_NE(plan.epoch_orders[0], plan.epoch_orders[1]);
}

TEST(Mixer, Errors) {
  auto expect_code = [](auto fn, ErrorCode code) {
    try {
      fn();
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  expect_code([] { mixer::build_plan(StageSpec::stage_two(0), {{"doc", ids("d", 2)}}); },
              ErrorCode::kMissingGroup);
  expect_code([] {
    mixer::build_plan(StageSpec::stage_two(0), {{"doc", ids("d", 2)},
                                                {"language_only", {}},
                                                {"general_vl", ids("v", 1)}});
  }, ErrorCode::kEmptyGroup);
  StageSpec zero = StageSpec::stage_one(0);
  zero.epochs = 0;
  expect_code([&] { mixer::build_plan(zero, {{"doc", ids("d", 2)}}); },
              ErrorCode::kInvalidArgument);
  expect_code([] { mixer::build_plan(StageSpec::stage_one(0), {{"doc", {"a", "a"}}}); },
              ErrorCode::kInvalidArgument);
}

InstructionRecord record(const std::string& id) {
  InstructionRecord r;
  r.record_id = id;
  r.dataset_id = id.substr(0, id.find(':'));
  r.image_ref = "i.png";
  r.question = "q " + id;
  r.answer = "a";
  return r;
}

TEST(Mixer, ShardsAndManifest) {
  TempDir dir;
  std::unordered_map<std::string, InstructionRecord> by_id;
  for (const auto& id : ids("doc", 25)) by_id.emplace(id, record(id));
  auto plan = mixer::build_plan(StageSpec::stage_one(9), {{"doc", ids("doc", 25)}});
  auto manifest = mixer::emit_shards(plan, by_id, 100, dir.path());
  ASSERT_EQ(manifest.shards.size(), 3u);
  EXPECT_EQ(manifest.shards[2].count, 50u);
  std::size_t lines = 0;
  for (const auto& s : manifest.shards) {
    std::string text = testing::read_file(dir / s.file);
    EXPECT_EQ(sha256_hex(text), s.sha256);
    lines += testing::read_lines(dir / s.file).size();
  }
  EXPECT_EQ(lines, 250u);
  auto back = mixer::manifest_from_json(
      Json::parse(testing::read_file(dir / std::string(mixer::kManifestFile))));
  EXPECT_EQ(back.seed, 9u);
  EXPECT_EQ(back.shards.size(), 3u);
}

TEST(Mixer, UnresolvedIdWritesNothing) {
  TempDir dir;
  auto plan = mixer::build_plan(StageSpec::stage_one(1), {{"doc", ids("doc", 3)}});
  std::unordered_map<std::string, InstructionRecord> by_id;
  by_id.emplace("doc:0:0", record("doc:0:0"));
  try {
    mixer::emit_shards(plan, by_id, 10, dir / "out");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnresolvedRecordId);
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "out"));
}

TEST(Mixer, TestSplitRecordsAreRejected) {
  std::vector<DatasetDescriptor> registry = {
      {"docvqa", TaskKind::kVqa, DomainKind::kDocument, Split::kTrain},
      {"llmdoc", TaskKind::kVqa, DomainKind::kDocument, Split::kTest}};
  EXPECT_NO_THROW(mixer::check_train_only({record("docvqa:0:0")}, registry));
  EXPECT_THROW(mixer::check_train_only({record("llmdoc:0:0")}, registry), Error);
}

}  // namespace
}  // namespace docinstruct
