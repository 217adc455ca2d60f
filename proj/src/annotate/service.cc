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

#include "docinstruct/annotate/service.h"

#include <algorithm>

#include "docinstruct/error.h"
#include "docinstruct/random.h"

namespace docinstruct::annotate {

std::vector<ModelResponse> read_responses(const std::filesystem::path& path) {
  std::vector<ModelResponse> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    out.push_back({require_string(obj, "item_id", source, line),
                   require_string(obj, "model_id", source, line),
                   require_string(obj, "response", source, line)});
  });
  return out;
}

AnnotationService::AnnotationService(std::vector<llmdoc::Item> items,
                                     std::vector<ModelResponse> responses,
                                     const ServiceOptions& options)
    : items_(std::move(items)),
      allowed_raters_(options.allowed_raters),
      seed_(options.seed) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!item_index_.emplace(items_[i].item_id, i).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate item '" + items_[i].item_id + "' in eval set");
    item_ids_.insert(items_[i].item_id);
  }
  for (auto& r : responses) {
    if (!item_index_.contains(r.item_id))
      throw Error(ErrorCode::kInvalidArgument,
                  "response for unknown item '" + r.item_id + "'");
    if (std::find(models_.begin(), models_.end(), r.model_id) == models_.end())
      models_.push_back(r.model_id);
    auto& slot = responses_[r.item_id];
    for (const auto& [model, _] : slot) {
      if (model == r.model_id)
        throw Error(ErrorCode::kInvalidArgument,
                    "two responses for item '" + r.item_id + "' and model '" +
                        r.model_id + "'");
    }
    slot.emplace_back(r.model_id, std::move(r.text));
  }
  // Keep each item's responses in global model order.
  for (auto& [_, list] : responses_) {
    std::stable_sort(list.begin(), list.end(), [&](const auto& a, const auto& b) {
      auto pa = std::find(models_.begin(), models_.end(), a.first);
      auto pb = std::find(models_.begin(), models_.end(), b.first);
      return pa < pb;
    });
  }

  auto initial = std::make_shared<State>();
  if (std::filesystem::is_regular_file(options.log_path)) {
    for (auto& r : llmdoc::read_ratings_log(options.log_path)) {
      if (!item_index_.contains(r.item_id) ||
          std::find(models_.begin(), models_.end(), r.model_id) == models_.end())
        throw Error(ErrorCode::kInvalidArgument,
                    "existing log references unknown item/model '" + r.item_id +
                        "'/'" + r.model_id + "'");
      initial->graded[{r.rater_id, r.item_id}].insert(r.model_id);
      initial->ratings.push_back(std::move(r));
    }
  }
  state_ = std::move(initial);
  log_ = std::make_unique<RatingsLog>(
      options.log_path, [this](const llmdoc::Rating& r) { commit(r); },
      options.clock);
}

std::string AnnotationService::slot_label(std::size_t position) {
  return "slot-" + std::to_string(position + 1);
}

std::shared_ptr<const AnnotationService::State> AnnotationService::snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return state_;
}

void AnnotationService::commit(const llmdoc::Rating& rating) {
  // Only the log's writer thread calls this, so copies never race.
  auto next = std::make_shared<State>(*snapshot());
  next->ratings.push_back(rating);
  next->graded[{rating.rater_id, rating.item_id}].insert(rating.model_id);
  std::lock_guard lock(snapshot_mu_);
  state_ = std::move(next);
}

std::vector<llmdoc::Rating> AnnotationService::ratings_snapshot() const {
  return snapshot()->ratings;
}

void AnnotationService::check_rater(const std::string& rater_id) const {
  if (rater_id.empty())
    throw Error(ErrorCode::kInvalidArgument, "rater id is required");
  if (allowed_raters_ && !allowed_raters_->contains(rater_id))
    throw Error(ErrorCode::kUnknownRater, "rater '" + rater_id + "' is not allowed");
}

std::vector<std::string> AnnotationService::slot_models(
    const std::string& item_id, const std::string& rater_id) const {
  std::vector<std::string> order;
  auto it = responses_.find(item_id);
  if (it == responses_.end()) return order;
  for (const auto& [model, _] : it->second) order.push_back(model);
  std::string key = item_id;
  key += '\x1f';
  key += rater_id;
  Rng rng(derive_seed(seed_, key));
  rng.shuffle(std::span<std::string>(order));
  return order;
}

std::optional<Bundle> AnnotationService::next_item(const std::string& rater_id) const {
  check_rater(rater_id);
  auto state = snapshot();
  auto graded_for = [&](const std::string& item_id) -> const std::set<std::string>* {
    auto it = state->graded.find({rater_id, item_id});
    return it == state->graded.end() ? nullptr : &it->second;
  };
  auto fully_graded = [&](const llmdoc::Item& item) {
    auto it = responses_.find(item.item_id);
    if (it == responses_.end()) return true;
    const auto* graded = graded_for(item.item_id);
    if (graded == nullptr) return false;
    return std::all_of(it->second.begin(), it->second.end(),
                       [&](const auto& r) { return graded->contains(r.first); });
  };

  std::size_t completed = 0;
  for (const auto& item : items_)
    if (fully_graded(item)) ++completed;

  for (const auto& item : items_) {
    if (fully_graded(item)) continue;
    Bundle b;
    b.item_id = item.item_id;
    b.dataset = item.dataset;
    b.image_ref = item.image_ref;
    b.instruction = item.instruction;
    b.completed_items = completed;
    b.total_items = items_.size();
    const auto& texts = responses_.at(item.item_id);
    const auto* graded = graded_for(item.item_id);
    std::vector<std::string> order = slot_models(item.item_id, rater_id);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      auto text = std::find_if(texts.begin(), texts.end(),
                               [&](const auto& r) { return r.first == order[pos]; });
      b.responses.push_back({slot_label(pos), text->second,
                             graded != nullptr && graded->contains(order[pos])});
    }
    return b;
  }
  return std::nullopt;
}

SubmitAck AnnotationService::submit_rating(const std::string& rater_id,
                                           const std::string& item_id,
                                           const std::string& slot,
                                           const std::string& grade) {
  check_rater(rater_id);
  if (!item_index_.contains(item_id))
    throw Error(ErrorCode::kUnknownItem, "unknown item '" + item_id + "'");
  auto g = llmdoc::parse_grade(grade);
  if (!g)
    throw Error(ErrorCode::kInvalidGrade,
                "grade must be one of A, B, C, D; got '" + grade + "'");

  std::vector<std::string> order = slot_models(item_id, rater_id);
  std::optional<std::string> model;
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    if (slot_label(pos) == slot) model = order[pos];
  if (!model)
    throw Error(ErrorCode::kUnknownSlot,
                "slot '" + slot + "' does not exist for item '" + item_id + "'");

  llmdoc::Rating rating{item_id, *model, rater_id, *g, {}};
  return {log_->append(std::move(rating)), slot};
}

llmdoc::Aggregate AnnotationService::summary() const {
  return llmdoc::aggregate(snapshot()->ratings, models_, &item_ids_);
}

Json to_json(const Bundle& bundle) {
  Json responses = Json::array();
  for (const auto& r : bundle.responses)
    responses.push_back({{"slot", r.slot}, {"text", r.text}, {"graded", r.graded}});
  return {{"item_id", bundle.item_id},
          {"dataset", bundle.dataset},
          {"image", bundle.image_ref},
          {"instruction", bundle.instruction},
          {"responses", std::move(responses)},
          {"progress",
           {{"completed_items", bundle.completed_items},
            {"total_items", bundle.total_items}}}};
}

Json to_json(const SubmitAck& ack) {
  // The model id stays server-side.
  return {{"ok", true},
          {"rating",
           {{"item_id", ack.rating.item_id},
            {"rater_id", ack.rating.rater_id},
            {"slot", ack.slot},
            {"grade", std::string(1, llmdoc::to_char(ack.rating.grade))},
            {"ts", ack.rating.timestamp}}}};
}

}  // namespace docinstruct::annotate
