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

#ifndef DOCINSTRUCT_LLMDOC_H_
#define DOCINSTRUCT_LLMDOC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docinstruct/jsonl.h"
#include "docinstruct/types.h"

namespace docinstruct::llmdoc {

// One scenario each: table, chart, document, natural image, webpage.
inline constexpr std::array<std::string_view, 5> kSourceDatasets = {
    "tabfact", "chartqa", "docvqa", "textvqa", "visualmrc"};
inline constexpr std::size_t kImagesPerDataset = 20;
inline constexpr std::size_t kRawPerDataset = 10;
inline constexpr std::size_t kAnnotatorPerDataset = 10;
inline constexpr std::size_t kTotalItems =
    kImagesPerDataset * kSourceDatasets.size();

enum class Origin { kRaw, kAnnotator };

std::string_view to_string(Origin origin);  // "raw" / "annotator"
std::optional<Origin> parse_origin(std::string_view name);

struct Item {
  std::string item_id;
  std::string dataset;
  std::string image_ref;
  std::string instruction;
  Origin origin = Origin::kRaw;
};

// An image chosen for the annotator-written half, waiting for its
// instruction. slot_id becomes the item id once filled.
struct PendingSlot {
  std::string slot_id;
  std::string dataset;
  std::string image_ref;
};

struct EvalSetDraft {
  std::vector<Item> raw_items;
  std::vector<PendingSlot> pending;
};

struct TestSplit {
  std::string dataset;
  std::vector<InstructionRecord> records;
};

// Samples 20 distinct images per dataset without replacement; the first ten
// keep their raw question, the other ten become pending slots. Requires
// exactly the five source datasets. Throws Error(kInsufficientSamples) for a
// split with fewer than 20 distinct images.
EvalSetDraft build_eval_set(const std::vector<TestSplit>& splits,
                            std::uint64_t seed);

struct AnnotatorInstruction {
  std::string slot_id;
  std::string instruction;
};

// Throws Error(kUnknownSlotId) for an instruction naming no pending slot and
// Error(kMissingInstruction) listing every slot left without a non-empty
// instruction.
std::vector<Item> attach_annotator_instructions(
    const EvalSetDraft& draft,
    const std::vector<AnnotatorInstruction>& instructions);

// Description of the first violated counting rule (20 per dataset, 10 of each
// origin, 100 total, unique ids), if any.
std::optional<std::string> check_eval_set(const std::vector<Item>& items);

Json to_json(const Item& item);
Json to_json(const PendingSlot& slot);
std::vector<Item> read_eval_set(const std::filesystem::path& path);
std::vector<PendingSlot> read_pending(const std::filesystem::path& path);
std::vector<AnnotatorInstruction> read_instructions(
    const std::filesystem::path& path);
void write_eval_set(const std::filesystem::path& path,
                    const std::vector<Item>& items);
void write_pending(const std::filesystem::path& path,
                   const std::vector<PendingSlot>& slots);

// A > B > C > D
enum class Grade { kA = 0, kB = 1, kC = 2, kD = 3 };

char to_char(Grade grade);
std::optional<Grade> parse_grade(std::string_view text);

struct Rating {
  std::string item_id;
  std::string model_id;
  std::string rater_id;
  Grade grade = Grade::kA;
  std::string timestamp;  // ISO-8601
};

// Microseconds since the Unix epoch for "YYYY-MM-DDTHH:MM:SS[.frac](Z|+hh:mm)".
std::optional<std::int64_t> parse_timestamp(std::string_view text);
std::string format_timestamp(std::int64_t micros_since_epoch);

// {"item_id", "model_id", "rater_id", "grade", "ts"}
Json to_json(const Rating& rating);
Rating rating_from_json(const Json& obj, const std::string& source,
                        std::size_t line);

// Reads complete lines only. When `upto_bytes` is set, bytes past that offset
// are ignored; a final line without its '\n' is treated as not yet written.
std::vector<Rating> read_ratings_log(
    const std::filesystem::path& path,
    std::optional<std::uint64_t> upto_bytes = std::nullopt);

struct GradeHistogram {
  std::array<std::size_t, 4> counts{};

  std::size_t operator[](Grade g) const {
    return counts[static_cast<std::size_t>(g)];
  }
  std::size_t total() const;
  bool operator==(const GradeHistogram&) const = default;
};

struct RankEntry {
  std::string model_id;
  std::size_t rank = 0;  // 1-based; tied models share a rank

  bool operator==(const RankEntry&) const = default;
};

struct Aggregate {
  std::vector<std::string> models;
  std::vector<GradeHistogram> histograms;  // parallel to models
  std::vector<RankEntry> ranking;          // empty when there are no ratings
  std::size_t effective_ratings = 0;

  const GradeHistogram& histogram(std::string_view model_id) const;
  bool operator==(const Aggregate&) const = default;
};

// Keeps one rating per (item, model, rater): the latest timestamp, ties going
// to the later position in `ratings`. Models rank by A count, then B, then C.
// Throws Error(kUnknownModel) / Error(kUnknownItem) for references outside
// `models` / `known_items` (the item check is skipped when known_items is
// null).
Aggregate aggregate(const std::vector<Rating>& ratings,
                    const std::vector<std::string>& models,
                    const std::set<std::string>* known_items = nullptr);

Json to_json(const Aggregate& aggregate);

}  // namespace docinstruct::llmdoc

#endif  // DOCINSTRUCT_LLMDOC_H_
