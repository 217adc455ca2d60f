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

#ifndef DOCINSTRUCT_ANNOTATE_SERVICE_H_
#define DOCINSTRUCT_ANNOTATE_SERVICE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "docinstruct/annotate/ratings_log.h"
#include "docinstruct/jsonl.h"
#include "docinstruct/llmdoc.h"

namespace docinstruct::annotate {

// Lines {"item_id": str, "model_id": str, "response": str}.
struct ModelResponse {
  std::string item_id;
  std::string model_id;
  std::string text;
};

std::vector<ModelResponse> read_responses(const std::filesystem::path& path);

struct BundleResponse {
  std::string slot;
  std::string text;
  bool graded = false;
};

// What a rater sees for one item. Model ids are replaced by slot labels whose
// order is a stable permutation per (item, rater).
struct Bundle {
  std::string item_id;
  std::string dataset;
  std::string image_ref;
  std::string instruction;
  std::vector<BundleResponse> responses;
  std::size_t completed_items = 0;
  std::size_t total_items = 0;
};

struct SubmitAck {
  llmdoc::Rating rating;
  std::string slot;
};

struct ServiceOptions {
  std::filesystem::path log_path;
  std::optional<std::set<std::string>> allowed_raters;
  std::uint64_t seed = 0;
  RatingsLog::ClockFn clock;
};

class AnnotationService {
 public:
  // Existing log lines are loaded so a restarted service resumes where it
  // stopped. Throws Error(kInvalidArgument) if responses or the existing log
  // reference unknown items, or an item/model pair is listed twice.
  AnnotationService(std::vector<llmdoc::Item> items,
                    std::vector<ModelResponse> responses,
                    const ServiceOptions& options);

  // Lowest-indexed item the rater has not graded for every model, or nullopt
  // when everything is graded.
  std::optional<Bundle> next_item(const std::string& rater_id) const;

  // Throws Error(kUnknownRater), Error(kUnknownItem), Error(kInvalidGrade),
  // Error(kUnknownSlot) or Error(kPersistence).
  SubmitAck submit_rating(const std::string& rater_id, const std::string& item_id,
                          const std::string& slot, const std::string& grade);

  llmdoc::Aggregate summary() const;

  // Model ids in display order for (item, rater).
  std::vector<std::string> slot_models(const std::string& item_id,
                                       const std::string& rater_id) const;

  const std::vector<std::string>& models() const { return models_; }
  const std::vector<llmdoc::Item>& items() const { return items_; }
  std::vector<llmdoc::Rating> ratings_snapshot() const;
  std::uint64_t log_size_bytes() const { return log_->size_bytes(); }

  static std::string slot_label(std::size_t position);

 private:
  struct State {
    std::vector<llmdoc::Rating> ratings;
    // (rater, item) -> models graded
    std::map<std::pair<std::string, std::string>, std::set<std::string>> graded;
  };

  std::shared_ptr<const State> snapshot() const;
  void commit(const llmdoc::Rating& rating);
  void check_rater(const std::string& rater_id) const;

  std::vector<llmdoc::Item> items_;
  std::map<std::string, std::size_t> item_index_;
  std::set<std::string> item_ids_;
  std::vector<std::string> models_;
  // item_id -> model_id -> response text, models in global order
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> responses_;
  std::optional<std::set<std::string>> allowed_raters_;
  std::uint64_t seed_;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const State> state_;
  std::unique_ptr<RatingsLog> log_;
};

Json to_json(const Bundle& bundle);
Json to_json(const SubmitAck& ack);

}  // namespace docinstruct::annotate

#endif  // DOCINSTRUCT_ANNOTATE_SERVICE_H_
