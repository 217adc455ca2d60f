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

#include "docinstruct/llmdoc.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "docinstruct/error.h"
#include "docinstruct/random.h"

namespace docinstruct::llmdoc {

namespace {

std::string slot_name(std::string_view dataset, std::size_t ordinal) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02zu", ordinal);
  return std::string(dataset) + "-" + buf;
}

bool is_source_dataset(std::string_view name) {
  return std::find(kSourceDatasets.begin(), kSourceDatasets.end(), name) !=
         kSourceDatasets.end();
}

bool parse_digits(std::string_view text, std::size_t pos, std::size_t len,
                  int& out) {
  if (pos + len > text.size()) return false;
  auto first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc() && ptr == first + len;
}

}  // namespace

std::string_view to_string(Origin origin) {
  return origin == Origin::kRaw ? "raw" : "annotator";
}

std::optional<Origin> parse_origin(std::string_view name) {
  if (name == "raw") return Origin::kRaw;
  if (name == "annotator") return Origin::kAnnotator;
  return std::nullopt;
}

EvalSetDraft build_eval_set(const std::vector<TestSplit>& splits,
                            std::uint64_t seed) {
  std::map<std::string_view, const TestSplit*> by_name;
  for (const auto& split : splits) {
    if (!is_source_dataset(split.dataset))
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + split.dataset + "' is not an evaluation source dataset");
    if (!by_name.emplace(split.dataset, &split).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "dataset '" + split.dataset + "' given twice");
  }

  EvalSetDraft draft;
  for (std::string_view name : kSourceDatasets) {
    auto found = by_name.find(name);
    if (found == by_name.end())
      throw Error(ErrorCode::kInvalidArgument,
                  "missing test split for '" + std::string(name) + "'");
    const TestSplit& split = *found->second;

    // Distinct images in first-appearance order, with the records asking
    // about each.
    std::vector<std::string_view> images;
    std::map<std::string_view, std::vector<const InstructionRecord*>> by_image;
    for (const auto& r : split.records) {
      if (r.image_ref.empty() || r.question.empty()) continue;
      auto& bucket = by_image[r.image_ref];
      if (bucket.empty()) images.push_back(r.image_ref);
      bucket.push_back(&r);
    }
    if (images.size() < kImagesPerDataset)
      throw Error(ErrorCode::kInsufficientSamples,
                  "test split '" + std::string(name) + "' has " +
                      std::to_string(images.size()) + " distinct images, needs " +
                      std::to_string(kImagesPerDataset));

    Rng rng(derive_seed(seed, name));
    // Partial Fisher-Yates: the first kImagesPerDataset positions are a
    // uniform sample without replacement.
    for (std::size_t i = 0; i < kImagesPerDataset; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(images.size() - i));
      std::swap(images[i], images[j]);
    }

    for (std::size_t i = 0; i < kImagesPerDataset; ++i) {
      const auto& bucket = by_image[images[i]];
      const InstructionRecord* pick = bucket[rng.below(bucket.size())];
      std::string id = slot_name(name, i + 1);
      if (i < kRawPerDataset) {
        draft.raw_items.push_back({id, std::string(name), pick->image_ref,
                                   pick->question, Origin::kRaw});
      } else {
        draft.pending.push_back({id, std::string(name), pick->image_ref});
      }
    }
  }
  return draft;
}

std::vector<Item> attach_annotator_instructions(
    const EvalSetDraft& draft,
    const std::vector<AnnotatorInstruction>& instructions) {
  std::map<std::string_view, const PendingSlot*> slots;
  for (const auto& s : draft.pending) slots.emplace(s.slot_id, &s);

  std::map<std::string_view, std::string_view> filled;
  for (const auto& ins : instructions) {
    if (!slots.contains(ins.slot_id))
      throw Error(ErrorCode::kUnknownSlotId,
                  "instruction for unknown slot '" + ins.slot_id + "'");
    if (!filled.emplace(ins.slot_id, ins.instruction).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "slot '" + ins.slot_id + "' has more than one instruction");
  }

  std::vector<std::string> missing;
  for (const auto& s : draft.pending) {
    auto it = filled.find(s.slot_id);
    if (it == filled.end() || it->second.empty()) missing.push_back(s.slot_id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kMissingInstruction,
                "no instruction for slot(s): " + list);
  }

  std::vector<Item> items;
  items.reserve(draft.raw_items.size() + draft.pending.size());
  for (std::string_view name : kSourceDatasets) {
    for (const auto& r : draft.raw_items)
      if (r.dataset == name) items.push_back(r);
    for (const auto& s : draft.pending) {
      if (s.dataset != name) continue;
      items.push_back({s.slot_id, s.dataset, s.image_ref,
                       std::string(filled.at(s.slot_id)), Origin::kAnnotator});
    }
  }
  return items;
}

std::optional<std::string> check_eval_set(const std::vector<Item>& items) {
  if (items.size() != kTotalItems)
    return "expected " + std::to_string(kTotalItems) + " items, found " +
           std::to_string(items.size());
  std::set<std::string_view> ids;
  std::map<std::string_view, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& item : items) {
    if (!ids.insert(item.item_id).second)
      return "duplicate item id '" + item.item_id + "'";
    if (!is_source_dataset(item.dataset))
      return "item '" + item.item_id + "' has unknown dataset '" + item.dataset + "'";
    if (item.instruction.empty())
      return "item '" + item.item_id + "' has no instruction";
    auto& c = counts[item.dataset];
    (item.origin == Origin::kRaw ? c.first : c.second) += 1;
  }
  for (std::string_view name : kSourceDatasets) {
    auto [raw, annotator] = counts[name];
    if (raw != kRawPerDataset || annotator != kAnnotatorPerDataset)
      return "dataset '" + std::string(name) + "' has " + std::to_string(raw) +
             " raw and " + std::to_string(annotator) + " annotator items";
  }
  return std::nullopt;
}

Json to_json(const Item& item) {
  return {{"item_id", item.item_id},
          {"dataset", item.dataset},
          {"image", item.image_ref},
          {"instruction", item.instruction},
          {"origin", std::string(to_string(item.origin))}};
}

Json to_json(const PendingSlot& slot) {
  return {{"slot_id", slot.slot_id},
          {"dataset", slot.dataset},
          {"image", slot.image_ref}};
}

std::vector<Item> read_eval_set(const std::filesystem::path& path) {
  std::vector<Item> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    Item item;
    item.item_id = require_string(obj, "item_id", source, line);
    item.dataset = require_string(obj, "dataset", source, line);
    item.image_ref = require_string(obj, "image", source, line);
    item.instruction = require_string(obj, "instruction", source, line);
    std::string origin = require_string(obj, "origin", source, line);
    auto o = parse_origin(origin);
    if (!o)
      throw SchemaError(source, line, "origin", "expected raw or annotator");
    item.origin = *o;
    out.push_back(std::move(item));
  });
  return out;
}

std::vector<PendingSlot> read_pending(const std::filesystem::path& path) {
  std::vector<PendingSlot> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    out.push_back({require_string(obj, "slot_id", source, line),
                   require_string(obj, "dataset", source, line),
                   require_string(obj, "image", source, line)});
  });
  return out;
}

std::vector<AnnotatorInstruction> read_instructions(
    const std::filesystem::path& path) {
  std::vector<AnnotatorInstruction> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    out.push_back({require_string(obj, "slot_id", source, line),
                   require_string(obj, "instruction", source, line)});
  });
  return out;
}

void write_eval_set(const std::filesystem::path& path,
                    const std::vector<Item>& items) {
  std::string text;
  for (const auto& item : items) text += to_jsonl_line(to_json(item));
  write_text_file(path, text);
}

void write_pending(const std::filesystem::path& path,
                   const std::vector<PendingSlot>& slots) {
  std::string text;
  for (const auto& s : slots) text += to_jsonl_line(to_json(s));
  write_text_file(path, text);
}

char to_char(Grade grade) { return static_cast<char>('A' + static_cast<int>(grade)); }

std::optional<Grade> parse_grade(std::string_view text) {
  if (text == "A") return Grade::kA;
  if (text == "B") return Grade::kB;
  if (text == "C") return Grade::kC;
  if (text == "D") return Grade::kD;
  return std::nullopt;
}

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  int y, mo, d, h, mi, s;
  if (text.size() < 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':')
    return std::nullopt;
  if (!parse_digits(text, 0, 4, y) || !parse_digits(text, 5, 2, mo) ||
      !parse_digits(text, 8, 2, d) || !parse_digits(text, 11, 2, h) ||
      !parse_digits(text, 14, 2, mi) || !parse_digits(text, 17, 2, s))
    return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;

  std::size_t pos = 19;
  std::int64_t micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 6) micros = micros * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (std::size_t k = digits; k < 6; ++k) micros *= 10;
  }

  std::int64_t offset_seconds = 0;
  std::string_view zone = text.substr(pos);
  if (zone == "Z") {
    offset_seconds = 0;
  } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') &&
             zone[3] == ':') {
    int oh, om;
    if (!parse_digits(zone, 1, 2, oh) || !parse_digits(zone, 4, 2, om))
      return std::nullopt;
    offset_seconds = (oh * 3600 + om * 60) * (zone[0] == '+' ? 1 : -1);
  } else {
    return std::nullopt;
  }

  std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  std::int64_t seconds = days * 86400 + h * 3600 + mi * 60 + s - offset_seconds;
  return seconds * 1'000'000 + micros;
}

std::string format_timestamp(std::int64_t micros_since_epoch) {
  using namespace std::chrono;
  std::int64_t seconds = micros_since_epoch / 1'000'000;
  std::int64_t micros = micros_since_epoch % 1'000'000;
  if (micros < 0) {
    micros += 1'000'000;
    seconds -= 1;
  }
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%06dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60),
                static_cast<int>(micros));
  return buf;
}

Json to_json(const Rating& rating) {
  return {{"item_id", rating.item_id},
          {"model_id", rating.model_id},
          {"rater_id", rating.rater_id},
          {"grade", std::string(1, to_char(rating.grade))},
          {"ts", rating.timestamp}};
}

Rating rating_from_json(const Json& obj, const std::string& source,
                        std::size_t line) {
  Rating r;
  r.item_id = require_string(obj, "item_id", source, line);
  r.model_id = require_string(obj, "model_id", source, line);
  r.rater_id = require_string(obj, "rater_id", source, line);
  std::string grade = require_string(obj, "grade", source, line);
  auto g = parse_grade(grade);
  if (!g) throw SchemaError(source, line, "grade", "expected A, B, C or D");
  r.grade = *g;
  r.timestamp = require_string(obj, "ts", source, line);
  if (!parse_timestamp(r.timestamp))
    throw SchemaError(source, line, "ts", "not an ISO-8601 timestamp");
  return r;
}

std::vector<Rating> read_ratings_log(const std::filesystem::path& path,
                                     std::optional<std::uint64_t> upto_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string data = buf.str();
  if (upto_bytes && *upto_bytes < data.size()) data.resize(*upto_bytes);
  // Drop a torn tail.
  auto last_newline = data.rfind('\n');
  data.resize(last_newline == std::string::npos ? 0 : last_newline + 1);

  std::vector<Rating> out;
  const std::string source = path.string();
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t end = data.find('\n', start);
    ++line_no;
    std::string_view line(data.data() + start, end - start);
    Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object())
      throw SchemaError(source, line_no, "", "line is not a JSON object");
    out.push_back(rating_from_json(obj, source, line_no));
    start = end + 1;
  }
  return out;
}

std::size_t GradeHistogram::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

const GradeHistogram& Aggregate::histogram(std::string_view model_id) const {
  for (std::size_t i = 0; i < models.size(); ++i)
    if (models[i] == model_id) return histograms[i];
  throw Error(ErrorCode::kUnknownModel,
              "no histogram for model '" + std::string(model_id) + "'");
}

Aggregate aggregate(const std::vector<Rating>& ratings,
                    const std::vector<std::string>& models,
                    const std::set<std::string>* known_items) {
  std::map<std::string_view, std::size_t> model_index;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (!model_index.emplace(models[i], i).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "model '" + models[i] + "' listed twice");
  }

  using Key = std::tuple<std::string_view, std::string_view, std::string_view>;
  struct Effective {
    std::int64_t ts;
    const Rating* rating;
  };
  std::map<Key, Effective> effective;
  for (const auto& r : ratings) {
    if (!model_index.contains(r.model_id))
      throw Error(ErrorCode::kUnknownModel,
                  "rating for unknown model '" + r.model_id + "'");
    if (known_items != nullptr && !known_items->contains(r.item_id))
      throw Error(ErrorCode::kUnknownItem,
                  "rating for unknown item '" + r.item_id + "'");
    auto ts = parse_timestamp(r.timestamp);
    if (!ts)
      throw Error(ErrorCode::kInvalidArgument,
                  "rating has a malformed timestamp '" + r.timestamp + "'");
    Key key{r.item_id, r.model_id, r.rater_id};
    auto [it, inserted] = effective.try_emplace(key, Effective{*ts, &r});
    if (!inserted && *ts >= it->second.ts) it->second = {*ts, &r};
  }

  Aggregate out;
  out.models = models;
  out.histograms.assign(models.size(), GradeHistogram{});
  for (const auto& [_, e] : effective) {
    auto& h = out.histograms[model_index.at(e.rating->model_id)];
    h.counts[static_cast<std::size_t>(e.rating->grade)] += 1;
  }
  out.effective_ratings = effective.size();
  if (effective.empty()) return out;

  auto rank_key = [&](std::size_t i) {
    const auto& c = out.histograms[i].counts;
    return std::make_tuple(c[0], c[1], c[2]);
  };
  std::vector<std::size_t> order(models.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rank_key(a) > rank_key(b);
  });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    std::size_t rank = pos + 1;
    if (pos > 0 && rank_key(order[pos]) == rank_key(order[pos - 1]))
      rank = out.ranking.back().rank;
    out.ranking.push_back({models[order[pos]], rank});
  }
  return out;
}

Json to_json(const Aggregate& aggregate) {
  Json models = Json::object();
  for (std::size_t i = 0; i < aggregate.models.size(); ++i) {
    const auto& h = aggregate.histograms[i];
    models[aggregate.models[i]] = {{"A", h.counts[0]},
                                   {"B", h.counts[1]},
                                   {"C", h.counts[2]},
                                   {"D", h.counts[3]}};
  }
  Json ranking = Json::array();
  for (const auto& r : aggregate.ranking)
    ranking.push_back({{"model", r.model_id}, {"rank", r.rank}});
  return {{"models", std::move(models)},
          {"ranking", std::move(ranking)},
          {"effective_ratings", aggregate.effective_ratings}};
}

}  // namespace docinstruct::llmdoc
