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

#include "docinstruct/unify.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "docinstruct/error.h"
#include "docinstruct/random.h"

namespace docinstruct::unify {

namespace {

const std::vector<std::string>& default_caption_prompts() {
  static const std::vector<std::string> prompts = {
      "Describe the image briefly.",
      "Give a short description of the image.",
      "Summarize the visual content of the image.",
      "Provide a brief caption for this picture.",
      "What does this image show? Answer in one sentence.",
      "Write a short caption for the image.",
      "Briefly describe what you see in the image.",
      "Give a concise description of this photo.",
      "Share a short summary of the image content.",
      "Describe the main content of the picture in a few words.",
  };
  return prompts;
}

InstructionRecord make_record(std::string_view dataset_id,
                              std::size_t sample_index, std::size_t sub_index,
                              std::string image, std::string question,
                              std::string answer, TaskKind task) {
  InstructionRecord r;
  r.record_id = make_record_id(dataset_id, sample_index, sub_index);
  r.dataset_id = std::string(dataset_id);
  r.image_ref = std::move(image);
  r.question = std::move(question);
  r.answer = std::move(answer);
  r.task = task;
  return r;
}

void set_references(InstructionRecord& r, const std::vector<std::string>& golds) {
  if (golds.size() > 1) r.references = golds;
}

}  // namespace

PromptPool::PromptPool(std::vector<std::string> prompts, std::uint64_t seed)
    : prompts_(std::move(prompts)), seed_(seed) {
  if (prompts_.empty())
    throw Error(ErrorCode::kInvalidArgument, "prompt pool must not be empty");
  for (const auto& p : prompts_) {
    if (p.empty())
      throw Error(ErrorCode::kInvalidArgument, "prompt pool has an empty prompt");
  }
}

PromptPool PromptPool::defaults(std::uint64_t seed) {
  return PromptPool(default_caption_prompts(), seed);
}

PromptPool PromptPool::load(const std::filesystem::path& path,
                            std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> prompts;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) prompts.push_back(line);
  }
  return PromptPool(std::move(prompts), seed);
}

const std::string& PromptPool::choose(std::size_t record_index) const {
  Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(record_index)));
  return prompts_[rng.below(prompts_.size())];
}

std::string ie_question(std::string_view key) {
  std::string q = "What is the value for the ";
  q += key;
  q += '?';
  return q;
}

InstructionRecord unify_vqa(const ingest::RawVqaSample& sample,
                            std::string_view dataset_id,
                            std::size_t sample_index) {
  InstructionRecord r =
      make_record(dataset_id, sample_index, 0, sample.image_ref,
                  sample.question, sample.answers.front(), TaskKind::kVqa);
  set_references(r, sample.answers);
  return r;
}

std::vector<InstructionRecord> unify_ie(const ingest::RawIeSample& sample,
                                        std::string_view dataset_id,
                                        std::size_t sample_index,
                                        bool include_missing) {
  std::vector<InstructionRecord> out;
  for (std::size_t k = 0; k < sample.key_universe.size(); ++k) {
    const std::string& key = sample.key_universe[k];
    auto it = sample.pairs.find(key);
    if (it == sample.pairs.end() && !include_missing) continue;
    std::string answer = it == sample.pairs.end()
                             ? std::string(kMissingValueAnswer)
                             : it->second;
    out.push_back(make_record(dataset_id, sample_index, k, sample.image_ref,
                              ie_question(key), std::move(answer),
                              TaskKind::kInfoExtraction));
  }
  return out;
}

std::vector<InstructionRecord> unify_ie(const ingest::RawIeSample& sample,
                                        std::string_view dataset_id,
                                        std::size_t sample_index,
                                        bool include_missing,
                                        const MissingKeyCap& cap) {
  std::vector<InstructionRecord> all =
      unify_ie(sample, dataset_id, sample_index, include_missing);
  if (!include_missing) return all;

  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!sample.pairs.contains(sample.key_universe[i])) missing.push_back(i);
  }
  if (missing.size() <= cap.max_missing) return all;

  std::string stream = std::string(dataset_id) + ":" + std::to_string(sample_index);
  Rng rng(derive_seed(cap.seed, stream));
  rng.shuffle(std::span<std::size_t>(missing));
  std::vector<bool> drop(all.size(), false);
  for (std::size_t i = cap.max_missing; i < missing.size(); ++i)
    drop[missing[i]] = true;

  std::vector<InstructionRecord> kept;
  kept.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!drop[i]) kept.push_back(std::move(all[i]));
  }
  return kept;
}

InstructionRecord unify_nli(const ingest::RawNliSample& sample,
                            std::string_view dataset_id,
                            std::size_t sample_index) {
  std::string question = sample.statement;
  question += kNliSuffix;
  std::string answer =
      sample.label == ingest::NliLabel::kEntailed ? "Yes" : "No";
  return make_record(dataset_id, sample_index, 0, sample.image_ref,
                     std::move(question), std::move(answer), TaskKind::kNli);
}

InstructionRecord unify_caption(const ingest::RawCaptionSample& sample,
                                std::string_view dataset_id,
                                const PromptPool& pool,
                                std::size_t record_index) {
  InstructionRecord r = make_record(
      dataset_id, record_index, 0, sample.image_ref, pool.choose(record_index),
      sample.captions.front(), TaskKind::kCaptioning);
  set_references(r, sample.captions);
  return r;
}

InstructionRecord unify_passthrough(const ingest::RawUnifiedSample& sample,
                                    std::string_view dataset_id,
                                    std::size_t sample_index, TaskKind task) {
  if (task != TaskKind::kLanguageOnly && task != TaskKind::kGeneralVl)
    throw Error(ErrorCode::kInvalidArgument,
                "passthrough is only for language_only and general_vl samples");
  InstructionRecord r = make_record(dataset_id, sample_index, 0, sample.image_ref,
                                    sample.question, sample.answer, task);
  if (auto problem = check_record(r))
    throw Error(ErrorCode::kInvalidArgument, r.record_id + ": " + *problem);
  return r;
}

std::vector<InstructionRecord> unify_dataset(const ingest::RawDataset& dataset,
                                             const DatasetDescriptor& descriptor,
                                             const UnifyOptions& options) {
  const std::string& id = descriptor.id;
  std::vector<InstructionRecord> out;

  if (const auto* vqa = std::get_if<std::vector<ingest::RawVqaSample>>(&dataset)) {
    for (std::size_t i = 0; i < vqa->size(); ++i)
      out.push_back(unify_vqa((*vqa)[i], id, i));
  } else if (const auto* ie =
                 std::get_if<std::vector<ingest::RawIeSample>>(&dataset)) {
    for (std::size_t i = 0; i < ie->size(); ++i) {
      std::vector<InstructionRecord> recs =
          options.missing_key_cap
              ? unify_ie((*ie)[i], id, i, options.include_missing,
                         MissingKeyCap{*options.missing_key_cap, options.seed})
              : unify_ie((*ie)[i], id, i, options.include_missing);
      std::move(recs.begin(), recs.end(), std::back_inserter(out));
    }
  } else if (const auto* nli =
                 std::get_if<std::vector<ingest::RawNliSample>>(&dataset)) {
    for (std::size_t i = 0; i < nli->size(); ++i)
      out.push_back(unify_nli((*nli)[i], id, i));
  } else if (const auto* caps =
                 std::get_if<std::vector<ingest::RawCaptionSample>>(&dataset)) {
    PromptPool pool = options.caption_prompts
                          ? PromptPool(*options.caption_prompts, options.seed)
                          : PromptPool::defaults(options.seed);
    for (std::size_t i = 0; i < caps->size(); ++i)
      out.push_back(unify_caption((*caps)[i], id, pool, i));
  } else {
    const auto& pre = std::get<std::vector<ingest::RawUnifiedSample>>(dataset);
    if (descriptor.task != TaskKind::kLanguageOnly &&
        descriptor.task != TaskKind::kGeneralVl)
      throw Error(ErrorCode::kInvalidArgument,
                  "pre-unified samples need a language_only or general_vl "
                  "descriptor");
    for (std::size_t i = 0; i < pre.size(); ++i)
      out.push_back(unify_passthrough(pre[i], id, i, descriptor.task));
  }
  return out;
}

}  // namespace docinstruct::unify
