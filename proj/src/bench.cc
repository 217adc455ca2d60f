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

#include "docinstruct/bench.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "docinstruct/error.h"
#include "docinstruct/metrics/answer_metrics.h"
#include "docinstruct/metrics/cider.h"
#include "docinstruct/unify.h"

namespace docinstruct::bench {

namespace {

struct MetricName {
  MetricKind kind;
  std::string_view name;
};

constexpr MetricName kMetricNames[] = {
    {MetricKind::kAnls, "anls"},
    {MetricKind::kRelaxedAccuracy, "relaxed_accuracy"},
    {MetricKind::kVqaSoftAccuracy, "vqa_accuracy"},
    {MetricKind::kKvF1, "kv_f1"},
    {MetricKind::kExactAccuracy, "exact_accuracy"},
    {MetricKind::kCider, "cider"},
};

constexpr std::string_view kWtqNote =
    "normalized exact match against the gold answer list; official "
    "denotation-set accuracy is not computed";

// "{dataset}:{sample}:{sub}" -> "{dataset}:{sample}"
std::string document_key(const std::string& record_id) {
  auto pos = record_id.rfind(':');
  return pos == std::string::npos ? record_id : record_id.substr(0, pos);
}

std::string ie_key(const InstructionRecord& r) {
  static const std::string prefix = unify::ie_question("");
  // prefix is "What is the value for the ?"; compare without the '?'.
  std::string_view head(prefix.data(), prefix.size() - 1);
  std::string_view q = r.question;
  if (q.starts_with(head) && q.ends_with('?') && q.size() > prefix.size())
    return std::string(q.substr(head.size(), q.size() - prefix.size()));
  return r.record_id;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string_view to_string(MetricKind metric) {
  for (const auto& m : kMetricNames)
    if (m.kind == metric) return m.name;
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  for (const auto& m : kMetricNames)
    if (m.name == name) return m.kind;
  return std::nullopt;
}

const std::map<std::string, MetricBinding, std::less<>>& default_bindings() {
  static const std::map<std::string, MetricBinding, std::less<>> bindings = {
      {"docvqa", {MetricKind::kAnls}},
      {"infovqa", {MetricKind::kAnls}},
      {"deepform", {MetricKind::kKvF1}},
      {"klc", {MetricKind::kKvF1}},
      {"wtq", {MetricKind::kExactAccuracy}},
      {"tabfact", {MetricKind::kExactAccuracy}},
      {"chartqa", {MetricKind::kRelaxedAccuracy}},
      {"textvqa", {MetricKind::kVqaSoftAccuracy}},
      {"textcaps", {MetricKind::kCider}},
      {"visualmrc", {MetricKind::kCider}},
  };
  return bindings;
}

MetricBinding binding_for(std::string_view dataset_id) {
  const auto& bindings = default_bindings();
  auto it = bindings.find(dataset_id);
  if (it == bindings.end())
    throw Error(ErrorCode::kMissingMetricBinding,
                "no metric bound to dataset '" + std::string(dataset_id) + "'");
  return it->second;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  std::set<std::string> seen;
  const std::string source = path.string();
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    Prediction p;
    p.record_id = require_string(obj, "record_id", source, line);
    p.prediction = require_string(obj, "prediction", source, line);
    if (!seen.insert(p.record_id).second)
      throw SchemaError(source, line, "record_id",
                        "duplicate prediction for '" + p.record_id + "'");
    out.push_back(std::move(p));
  });
  return out;
}

MetricReport score_run(const std::vector<Prediction>& predictions,
                       const std::vector<InstructionRecord>& gold,
                       std::string_view dataset_id,
                       const MetricBinding& binding, bool keep_per_sample) {
  if (gold.empty())
    throw Error(ErrorCode::kInvalidArgument, "gold set is empty");

  std::unordered_map<std::string, std::size_t> gold_index;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold_index.emplace(gold[i].record_id, i).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate gold record '" + gold[i].record_id + "'");
  }
  std::vector<const std::string*> pred_for(gold.size(), nullptr);
  for (const auto& p : predictions) {
    auto it = gold_index.find(p.record_id);
    if (it == gold_index.end())
      throw Error(ErrorCode::kUnknownRecordId,
                  "prediction for unknown record '" + p.record_id + "'");
    if (pred_for[it->second] != nullptr)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate prediction for '" + p.record_id + "'");
    pred_for[it->second] = &p.prediction;
  }

  MetricReport report;
  report.dataset = std::string(dataset_id);
  report.metric = binding.metric;
  if (dataset_id == "wtq" && binding.metric == MetricKind::kExactAccuracy)
    report.note = std::string(kWtqNote);
  for (const auto* p : pred_for)
    if (p == nullptr) ++report.unanswered;

  std::vector<std::pair<std::string, double>> per_sample;
  const auto& policy = binding.policy;

  switch (binding.metric) {
    case MetricKind::kKvF1: {
      std::vector<std::string> order;
      std::map<std::string, std::pair<metrics::KeyValues, metrics::KeyValues>> docs;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        std::string doc = document_key(gold[i].record_id);
        auto [it, inserted] = docs.try_emplace(doc);
        if (inserted) order.push_back(doc);
        std::string key = ie_key(gold[i]);
        it->second.second[key] = gold[i].answer;
        if (pred_for[i] != nullptr) it->second.first[key] = *pred_for[i];
      }
      for (const auto& doc : order) {
        const auto& [pred, truth] = docs[doc];
        per_sample.emplace_back(doc, metrics::kv_f1(pred, truth, policy).f1);
      }
      break;
    }
    case MetricKind::kCider: {
      std::map<std::string, std::string> candidates;
      std::map<std::string, std::vector<std::string>> references;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        candidates[gold[i].record_id] = pred_for[i] ? *pred_for[i] : "";
        references[gold[i].record_id] = gold[i].gold_answers();
      }
      metrics::CiderResult result = metrics::cider(candidates, references);
      for (const auto& r : gold)
        per_sample.emplace_back(r.record_id, result.per_item.at(r.record_id));
      report.score = result.corpus * 100.0;
      break;
    }
    default: {
      for (std::size_t i = 0; i < gold.size(); ++i) {
        double s = 0.0;
        if (pred_for[i] != nullptr) {
          const std::string& pred = *pred_for[i];
          std::vector<std::string> golds = gold[i].gold_answers();
          switch (binding.metric) {
            case MetricKind::kAnls:
              s = metrics::anls(pred, golds, metrics::kAnlsThreshold, policy);
              break;
            case MetricKind::kRelaxedAccuracy:
              s = std::any_of(golds.begin(), golds.end(),
                              [&](const std::string& g) {
                                return metrics::relaxed_match(
                                    pred, g, metrics::kRelaxedTolerance, policy);
                              })
                      ? 1.0
                      : 0.0;
              break;
            case MetricKind::kVqaSoftAccuracy:
              s = metrics::vqa_soft_accuracy(pred, golds, policy);
              break;
            case MetricKind::kExactAccuracy:
              s = metrics::exact_accuracy(pred, golds, policy);
              break;
            default:
              break;
          }
        }
        per_sample.emplace_back(gold[i].record_id, s);
      }
      break;
    }
  }

  report.n_samples = per_sample.size();
  if (binding.metric != MetricKind::kCider) {
    double sum = 0.0;
    for (const auto& [_, s] : per_sample) sum += s;
    report.score = sum / static_cast<double>(per_sample.size()) * 100.0;
  }
  if (keep_per_sample) report.per_sample = std::move(per_sample);
  return report;
}

Json to_json(const MetricReport& report) {
  Json out = Json::object();
  out["model"] = report.model;
  out["dataset"] = report.dataset;
  out["metric"] = std::string(to_string(report.metric));
  out["score"] = report.score;
  out["n_samples"] = report.n_samples;
  out["unanswered"] = report.unanswered;
  if (!report.note.empty()) out["note"] = report.note;
  if (!report.per_sample.empty()) {
    Json rows = Json::array();
    for (const auto& [id, s] : report.per_sample)
      rows.push_back({{"id", id}, {"score", s}});
    out["per_sample"] = std::move(rows);
  }
  return out;
}

MetricReport report_from_json(const Json& obj) {
  MetricReport r;
  try {
    r.model = obj.at("model").get<std::string>();
    r.dataset = obj.at("dataset").get<std::string>();
    auto metric = parse_metric(obj.at("metric").get<std::string>());
    if (!metric) throw Error(ErrorCode::kSchema, "report names an unknown metric");
    r.metric = *metric;
    r.score = obj.at("score").get<double>();
    r.n_samples = obj.at("n_samples").get<std::size_t>();
    r.unanswered = obj.value("unanswered", std::size_t{0});
    r.note = obj.value("note", std::string());
    if (obj.contains("per_sample")) {
      for (const auto& row : obj.at("per_sample"))
        r.per_sample.emplace_back(row.at("id").get<std::string>(),
                                  row.at("score").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("bad metric report: ") + e.what());
  }
  return r;
}

BaselineTable parse_baselines(std::string_view text, const std::string& source) {
  BaselineTable table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, '\t')) fields.push_back(field);

    if (fields.front() == "@title") {
      if (fields.size() != 2)
        throw SchemaError(source, line_no, "@title", "expected one value");
      table.title = fields[1];
      continue;
    }
    if (!have_header) {
      if (fields.front() != "model" || fields.size() < 2)
        throw SchemaError(source, line_no, "",
                          "header must be 'model' followed by dataset ids");
      table.columns.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size() + 1)
      throw SchemaError(source, line_no, "",
                        "expected " + std::to_string(table.columns.size() + 1) +
                            " tab-separated fields");
    const std::string& model = fields.front();
    if (std::find(table.models.begin(), table.models.end(), model) !=
        table.models.end())
      throw SchemaError(source, line_no, "model", "duplicate row '" + model + "'");
    table.models.push_back(model);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const std::string& cell = fields[c + 1];
      if (cell == "-") continue;
      auto value = metrics::parse_number(cell);
      if (!value)
        throw SchemaError(source, line_no, table.columns[c],
                          "not a number: '" + cell + "'");
      table.cells[{model, table.columns[c]}] = {*value, cell};
    }
  }
  if (!have_header) throw SchemaError(source, line_no, "", "missing header line");
  return table;
}

BaselineTable load_baselines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_baselines(buf.str(), path.string());
}

ComparisonTable compare(const std::vector<MetricReport>& reports,
                        const BaselineTable& baselines) {
  ComparisonTable table;
  table.title = baselines.title;
  table.columns = baselines.columns;
  table.models = baselines.models;

  std::map<std::pair<std::string, std::string>, ComparisonCell> cells;
  for (const auto& [key, cell] : baselines.cells)
    cells[key] = {cell.value, cell.text, false};
  for (const auto& r : reports) {
    if (std::find(table.models.begin(), table.models.end(), r.model) ==
        table.models.end())
      table.models.push_back(r.model);
    if (std::find(table.columns.begin(), table.columns.end(), r.dataset) ==
        table.columns.end())
      table.columns.push_back(r.dataset);
    cells[{r.model, r.dataset}] = {r.score, format_value(r.score), false};
  }

  for (const auto& column : table.columns) {
    std::optional<double> best;
    for (const auto& model : table.models) {
      auto it = cells.find({model, column});
      if (it != cells.end() && (!best || it->second.value > *best))
        best = it->second.value;
    }
    for (const auto& model : table.models) {
      auto it = cells.find({model, column});
      if (it != cells.end() && it->second.value == *best) it->second.best = true;
    }
  }

  for (const auto& model : table.models) {
    std::vector<std::optional<ComparisonCell>> row;
    for (const auto& column : table.columns) {
      auto it = cells.find({model, column});
      if (it == cells.end()) {
        row.emplace_back();
      } else {
        row.push_back(it->second);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string display_name(std::string_view dataset_id) {
  static const std::map<std::string, std::string, std::less<>> names = {
      {"docvqa", "DocVQA"},     {"infovqa", "InfoVQA"},
      {"deepform", "DeepForm"}, {"klc", "KLC"},
      {"wtq", "WTQ"},           {"tabfact", "TabFact"},
      {"chartqa", "ChartQA"},   {"textvqa", "TextVQA"},
      {"textcaps", "TextCaps"}, {"visualmrc", "VisualMRC"},
  };
  auto it = names.find(dataset_id);
  return it == names.end() ? std::string(dataset_id) : it->second;
}

std::string render_text(const ComparisonTable& table) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"Model"};
  for (const auto& c : table.columns) header.push_back(display_name(c));
  grid.push_back(header);
  for (std::size_t i = 0; i < table.models.size(); ++i) {
    std::vector<std::string> row = {table.models[i]};
    for (const auto& cell : table.rows[i])
      row.push_back(cell ? cell->text + (cell->best ? "*" : "") : "-");
    grid.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  auto emit_row = [&](std::string& out, const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      if (c + 1 < row.size()) cell.resize(width[c], ' ');
      out += c == 0 ? cell : " | " + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };

  std::string out;
  if (!table.title.empty()) out += table.title + "\n";
  emit_row(out, grid.front());
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule += std::string(width[c], '-');
  }
  out += rule + "\n";
  for (std::size_t r = 1; r < grid.size(); ++r) emit_row(out, grid[r]);
  return out;
}

std::string render_jsonl(const ComparisonTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.models.size(); ++i) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = table.rows[i][c];
      Json obj = Json::object();
      obj["model"] = table.models[i];
      obj["dataset"] = table.columns[c];
      obj["value"] = cell ? Json(cell->value) : Json(nullptr);
      obj["best"] = cell ? cell->best : false;
      out += to_jsonl_line(obj);
    }
  }
  return out;
}

}  // namespace docinstruct::bench
