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

#include "docinstruct/ingest.h"

#include <fstream>
#include <set>

#include "docinstruct/error.h"
#include "docinstruct/prompt.h"

namespace docinstruct::ingest {

namespace {

void require_non_empty(const std::string& value, std::string_view field,
                       const std::string& source, std::size_t line) {
  if (value.empty())
    throw SchemaError(source, line, std::string(field), "must not be empty");
}

// Text that ends up inside a rendered prompt must not carry the separator.
void require_promptable(const std::string& value, std::string_view field,
                        const std::string& source, std::size_t line) {
  require_non_empty(value, field, source, line);
  if (contains_prompt_separator(value))
    throw SchemaError(source, line, std::string(field),
                      "contains the reserved separator ' AI:'");
}

std::string require_image(const Json& obj, const std::string& source,
                          std::size_t line) {
  std::string image = require_string(obj, "image", source, line);
  require_non_empty(image, "image", source, line);
  return image;
}

}  // namespace

std::vector<RawVqaSample> load_vqa(const std::filesystem::path& path) {
  std::vector<RawVqaSample> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    RawVqaSample s;
    s.image_ref = require_image(obj, source, line);
    s.question = require_string(obj, "question", source, line);
    require_promptable(s.question, "question", source, line);
    s.answers = require_string_list(obj, "answers", source, line);
    if (s.answers.empty())
      throw SchemaError(source, line, "answers", "needs at least one answer");
    require_promptable(s.answers.front(), "answers", source, line);
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<RawIeSample> load_ie(const std::filesystem::path& path) {
  std::vector<RawIeSample> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    RawIeSample s;
    s.image_ref = require_image(obj, source, line);
    s.key_universe = require_string_list(obj, "key_universe", source, line);
    if (s.key_universe.empty())
      throw SchemaError(source, line, "key_universe", "must not be empty");
    std::set<std::string_view> universe;
    for (const auto& key : s.key_universe) {
      require_promptable(key, "key_universe", source, line);
      if (!universe.insert(key).second)
        throw SchemaError(source, line, "key_universe",
                          "duplicate key '" + key + "'");
    }
    auto pairs = obj.find("pairs");
    if (pairs == obj.end())
      throw SchemaError(source, line, "pairs", "missing");
    if (!pairs->is_object())
      throw SchemaError(source, line, "pairs", "expected an object");
    for (const auto& [key, value] : pairs->items()) {
      if (!universe.contains(key))
        throw SchemaError(source, line, "pairs",
                          "key '" + key + "' is not in key_universe");
      if (!value.is_string())
        throw SchemaError(source, line, "pairs",
                          "value for '" + key + "' must be a string");
      std::string v = value.get<std::string>();
      require_promptable(v, "pairs", source, line);
      s.pairs.emplace(key, std::move(v));
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<RawNliSample> load_nli(const std::filesystem::path& path) {
  std::vector<RawNliSample> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    RawNliSample s;
    s.image_ref = require_image(obj, source, line);
    s.statement = require_string(obj, "statement", source, line);
    require_promptable(s.statement, "statement", source, line);
    std::string label = require_string(obj, "label", source, line);
    if (label == "Entailed") {
      s.label = NliLabel::kEntailed;
    } else if (label == "Refuted") {
      s.label = NliLabel::kRefuted;
    } else {
      throw SchemaError(source, line, "label",
                        "expected Entailed or Refuted, got '" + label + "'");
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<RawCaptionSample> load_captions(const std::filesystem::path& path) {
  std::vector<RawCaptionSample> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    RawCaptionSample s;
    s.image_ref = require_image(obj, source, line);
    s.captions = require_string_list(obj, "captions", source, line);
    if (s.captions.empty())
      throw SchemaError(source, line, "captions", "needs at least one caption");
    require_promptable(s.captions.front(), "captions", source, line);
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<RawUnifiedSample> load_unified(const std::filesystem::path& path,
                                           TaskKind task) {
  if (task != TaskKind::kLanguageOnly && task != TaskKind::kGeneralVl)
    throw Error(ErrorCode::kInvalidArgument,
                "pre-unified files are only accepted for language_only and "
                "general_vl");
  std::vector<RawUnifiedSample> out;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    RawUnifiedSample s;
    s.image_ref = require_string(obj, "image", source, line);
    if (task == TaskKind::kLanguageOnly && !s.image_ref.empty())
      throw SchemaError(source, line, "image",
                        "language-only samples must not reference an image");
    if (task == TaskKind::kGeneralVl && s.image_ref.empty())
      throw SchemaError(source, line, "image", "must not be empty");
    s.question = require_string(obj, "question", source, line);
    require_promptable(s.question, "question", source, line);
    s.answer = require_string(obj, "answer", source, line);
    require_promptable(s.answer, "answer", source, line);
    out.push_back(std::move(s));
  });
  return out;
}

RawDataset load_dataset(const DatasetDescriptor& descriptor) {
  const auto& path = descriptor.source_path;
  switch (descriptor.task) {
    case TaskKind::kVqa: return load_vqa(path);
    case TaskKind::kInfoExtraction: return load_ie(path);
    case TaskKind::kNli: return load_nli(path);
    case TaskKind::kCaptioning: return load_captions(path);
    case TaskKind::kLanguageOnly:
    case TaskKind::kGeneralVl: return load_unified(path, descriptor.task);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown task kind");
}

std::size_t sample_count(const RawDataset& dataset) {
  return std::visit([](const auto& samples) { return samples.size(); },
                    dataset);
}

std::vector<std::string> find_missing_images(
    const RawDataset& dataset, const std::filesystem::path& image_root) {
  std::vector<std::string> missing;
  std::set<std::string> checked;
  std::visit(
      [&](const auto& samples) {
        for (const auto& s : samples) {
          if (s.image_ref.empty() || !checked.insert(s.image_ref).second)
            continue;
          if (!std::filesystem::exists(image_root / s.image_ref))
            missing.push_back(s.image_ref);
        }
      },
      dataset);
  return missing;
}

std::vector<DatasetDescriptor> load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string source = path.string();
  Json doc = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_array())
    throw SchemaError(source, 1, "", "registry must be a JSON array");

  std::vector<DatasetDescriptor> out;
  std::size_t entry = 0;
  for (const auto& obj : doc) {
    ++entry;
    if (!obj.is_object())
      throw SchemaError(source, entry, "", "entry is not an object");
    DatasetDescriptor d;
    d.id = require_string(obj, "id", source, entry);
    std::string task = require_string(obj, "task", source, entry);
    std::string domain = require_string(obj, "domain", source, entry);
    std::string split = require_string(obj, "split", source, entry);
    auto t = parse_task(task);
    if (!t) throw SchemaError(source, entry, "task", "unknown task '" + task + "'");
    auto dm = parse_domain(domain);
    if (!dm)
      throw SchemaError(source, entry, "domain",
                        "unknown domain '" + domain + "'");
    auto sp = parse_split(split);
    if (!sp)
      throw SchemaError(source, entry, "split", "expected train or test");
    d.task = *t;
    d.domain = *dm;
    d.split = *sp;
    std::filesystem::path p = require_string(obj, "path", source, entry);
    d.source_path = p.is_absolute() ? p : path.parent_path() / p;
    out.push_back(std::move(d));
  }
  validate_descriptors(out);
  return out;
}

CompositionReport composition_report(
    const std::vector<DatasetDescriptor>& descriptors) {
  validate_descriptors(descriptors);
  CompositionReport report;
  for (const auto& d : descriptors) {
    std::size_t n = sample_count(load_dataset(d));
    report.datasets.push_back({d.id, d.task, d.domain, n});
    auto& task = report.by_task[d.task];
    task.datasets += 1;
    task.samples += n;
    auto& domain = report.by_domain[d.domain];
    domain.datasets += 1;
    domain.samples += n;
    report.total_samples += n;
  }
  return report;
}

Json to_json(const CompositionReport& report) {
  Json out = Json::object();
  Json datasets = Json::array();
  for (const auto& d : report.datasets) {
    datasets.push_back({{"id", d.id},
                        {"task", std::string(to_string(d.task))},
                        {"domain", std::string(to_string(d.domain))},
                        {"samples", d.samples}});
  }
  Json by_task = Json::object();
  for (const auto& [task, count] : report.by_task)
    by_task[std::string(to_string(task))] = {{"datasets", count.datasets},
                                             {"samples", count.samples}};
  Json by_domain = Json::object();
  for (const auto& [domain, count] : report.by_domain)
    by_domain[std::string(to_string(domain))] = {{"datasets", count.datasets},
                                                 {"samples", count.samples}};
  out["datasets"] = std::move(datasets);
  out["by_task"] = std::move(by_task);
  out["by_domain"] = std::move(by_domain);
  out["total"] = report.total_samples;
  return out;
}

}  // namespace docinstruct::ingest
