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

#include <algorithm>
#include <map>
#include <set>

#include "docinstruct/error.h"
#include "docinstruct/llmdoc.h"
#include "docinstruct/random.h"
#include "support/fixtures.h"

namespace docinstruct::llmdoc {
namespace {

using testing::HumanEvalFixture;
using testing::synthetic_splits;
using testing::TempDir;

std::vector<AnnotatorInstruction> fill(const EvalSetDraft& draft) {
  std::vector<AnnotatorInstruction> out;
  for (const auto& p : draft.pending) out.push_back({p.slot_id, "Describe " + p.image_ref});
  return out;
}

TEST(EvalSet, CountsHoldAcrossSeeds) {
  auto splits = synthetic_splits(35);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto draft = build_eval_set(splits, seed);
    ASSERT_EQ(draft.raw_items.size(), 50u);
    ASSERT_EQ(draft.pending.size(), 50u);
    auto items = attach_annotator_instructions(draft, fill(draft));
    ASSERT_EQ(items.size(), kTotalItems);
    ASSERT_FALSE(check_eval_set(items).has_value()) << *check_eval_set(items);

    std::map<std::string, std::set<std::string>> images;
    std::map<std::string, int> raw;
    for (const auto& it : items) {
      images[it.dataset].insert(it.image_ref);
      raw[it.dataset] += it.origin == Origin::kRaw;
    }
    for (auto name : kSourceDatasets) {
      EXPECT_EQ(images[std::string(name)].size(), 20u);
      EXPECT_EQ(raw[std::string(name)], 10);
    }
  }
}

TEST(EvalSet, SeedChangesSampleAndIsReproducible) {
  auto splits = synthetic_splits(60);
  auto a = build_eval_set(splits, 1), b = build_eval_set(splits, 1), c = build_eval_set(splits, 2);
  auto images = [](const EvalSetDraft& d) {
    std::vector<std::string> v;
    for (const auto& r : d.raw_items) v.push_back(r.image_ref);
    return v;
  };
  EXPECT_EQ(images(a), images(b));
  EXPECT_NE(images(a), images(c));
}

TEST(EvalSet, ItemIdsAreDatasetOrdinals) {
  auto draft = build_eval_set(synthetic_splits(20), 0);
  EXPECT_EQ(draft.raw_items.front().item_id, "tabfact-01");
  EXPECT_EQ(draft.pending.front().slot_id, "tabfact-11");
  EXPECT_EQ(draft.pending.back().slot_id, "visualmrc-20");
}

TEST(EvalSet, TooFewImages) {
  auto splits = synthetic_splits(20);
  splits[2] = testing::synthetic_split(std::string(kSourceDatasets[2]), 19, 5);
  try {
    build_eval_set(splits, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
  }
  splits.pop_back();
  EXPECT_THROW(build_eval_set(splits, 0), Error);
}

TEST(EvalSet, AttachReportsEveryGap) {
  auto draft = build_eval_set(synthetic_splits(20), 0);
  auto ins = fill(draft);
  ins.erase(ins.begin() + 3);
  ins[7].instruction.clear();
  try {
    attach_annotator_instructions(draft, ins);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingInstruction);
    EXPECT_NE(std::string(e.what()).find(draft.pending[3].slot_id), std::string::npos);
    EXPECT_NE(std::string(e.what()).find(draft.pending[8].slot_id), std::string::npos);
  }
  auto extra = fill(draft);
  extra.push_back({"docvqa-99", "x"});
  try {
    attach_annotator_instructions(draft, extra);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSlotId);
  }
}

TEST(EvalSet, FileRoundTrip) {
  TempDir dir;
  auto draft = build_eval_set(synthetic_splits(20), 4);
  auto items = attach_annotator_instructions(draft, fill(draft));
  write_eval_set(dir / "eval.jsonl", items);
  write_pending(dir / "pending.jsonl", draft.pending);
  auto back = read_eval_set(dir / "eval.jsonl");
  ASSERT_EQ(back.size(), items.size());
  EXPECT_EQ(back[15].instruction, items[15].instruction);
  EXPECT_EQ(back[15].origin, items[15].origin);
  EXPECT_EQ(read_pending(dir / "pending.jsonl").size(), 50u);
}

TEST(Grades, ParseAndPrint) {
  EXPECT_EQ(parse_grade("A"), Grade::kA);
  EXPECT_EQ(parse_grade("D"), Grade::kD);
  EXPECT_FALSE(parse_grade("E").has_value());
  EXPECT_FALSE(parse_grade("a").has_value());
  EXPECT_FALSE(parse_grade("AB").has_value());
  EXPECT_EQ(to_char(Grade::kC), 'C');
}

TEST(Timestamps, RoundTripAndOffsets) {
  std::int64_t t = 1'700'000'123'456'789;
  EXPECT_EQ(parse_timestamp(format_timestamp(t)), t);
  EXPECT_EQ(format_timestamp(0), "1970-01-01T00:00:00.000000Z");
  EXPECT_EQ(parse_timestamp("2024-01-01T01:00:00+01:00"), parse_timestamp("2024-01-01T00:00:00Z"));
  EXPECT_EQ(parse_timestamp("2024-01-01T00:00:00.5Z"),
            *parse_timestamp("2024-01-01T00:00:00Z") + 500000);
  EXPECT_FALSE(parse_timestamp("2024-13-01T00:00:00Z").has_value());
  EXPECT_FALSE(parse_timestamp("yesterday").has_value());
}

TEST(Aggregate, HumanEvalFixture) {
  HumanEvalFixture f;
  auto agg = aggregate(f.ratings, f.models, &f.items);
  EXPECT_EQ(agg.histogram("mPLUG-DocOwl")[Grade::kA], 37u);
  EXPECT_EQ(agg.histogram("mPLUG-DocOwl").total(), 100u);
  EXPECT_EQ(agg.effective_ratings, 300u);
  ASSERT_EQ(agg.ranking.size(), 3u);
  EXPECT_EQ(agg.ranking[0], (RankEntry{"mPLUG-DocOwl", 1}));
  EXPECT_EQ(agg.ranking[1], (RankEntry{"mPLUG-Owl", 2}));
  for (std::size_t m = 0; m < f.models.size(); ++m) {
    const auto& h = agg.histogram(f.models[m]);
    for (std::size_t g = 0; g < 4; ++g)
      EXPECT_EQ(h.counts[g], f.counts[m][g]) << f.models[m] << " " << g;
  }
}

TEST(Aggregate, PermutationInvariant) {
  HumanEvalFixture f;
  auto expected = aggregate(f.ratings, f.models);
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    auto shuffled = f.ratings;
    rng.shuffle(std::span<Rating>(shuffled));
    ASSERT_EQ(aggregate(shuffled, f.models), expected);
  }
}

TEST(Aggregate, LatestWinsAndTiesGoToLaterEntry) {
  std::vector<std::string> models = {"m"};
  std::vector<Rating> r = {
      {"i", "m", "r", Grade::kA, "2024-01-01T00:00:02Z"},
      {"i", "m", "r", Grade::kD, "2024-01-01T00:00:01Z"},
  };
  EXPECT_EQ(aggregate(r, models).histogram("m")[Grade::kA], 1u);
  r.push_back({"i", "m", "r", Grade::kB, "2024-01-01T00:00:02Z"});
  auto agg = aggregate(r, models);
  EXPECT_EQ(agg.histogram("m")[Grade::kB], 1u);
  EXPECT_EQ(agg.effective_ratings, 1u);
  // A second rater counts separately.
  r.push_back({"i", "m", "r2", Grade::kC, "2024-01-01T00:00:00Z"});
  EXPECT_EQ(aggregate(r, models).effective_ratings, 2u);
}

TEST(Aggregate, TiedModelsShareRank) {
  std::vector<Rating> r = {
      {"i", "x", "r", Grade::kA, "2024-01-01T00:00:00Z"},
      {"i", "y", "r", Grade::kA, "2024-01-01T00:00:00Z"},
      {"i", "z", "r", Grade::kB, "2024-01-01T00:00:00Z"},
  };
  auto agg = aggregate(r, {"x", "y", "z"});
  ASSERT_EQ(agg.ranking.size(), 3u);
  EXPECT_EQ(agg.ranking[0].rank, 1u);
  EXPECT_EQ(agg.ranking[1].rank, 1u);
  EXPECT_EQ(agg.ranking[2], (RankEntry{"z", 3}));
}

TEST(Aggregate, EmptyLogHasNoRanking) {
  auto agg = aggregate({}, {"x", "y"});
  EXPECT_TRUE(agg.ranking.empty());
  EXPECT_EQ(agg.histogram("x").total(), 0u);
}

TEST(Aggregate, RejectsUnknownModelAndItem) {
  std::vector<Rating> r = {{"i", "ghost", "r", Grade::kA, "2024-01-01T00:00:00Z"}};
  try {
    aggregate(r, {"x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownModel);
  }
  std::set<std::string> known = {"j"};
  r[0].model_id = "x";
  try {
    aggregate(r, {"x"}, &known);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownItem);
  }
}

TEST(RatingsLogFile, TornTailIsIgnored) {
  TempDir dir;
  HumanEvalFixture f;
  std::string text;
  for (int i = 0; i < 3; ++i) text += to_json(f.ratings[i]).dump() + "\n";
  text += R"({"item_id":"tabfact-01","mod)";
  testing::write_file(dir / "log.jsonl", text);
  EXPECT_EQ(read_ratings_log(dir / "log.jsonl").size(), 3u);
}

}  // namespace
}  // namespace docinstruct::llmdoc
