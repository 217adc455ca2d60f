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

// Acceptance suite: one pass/fail line per release criterion. Exits non-zero
// if any criterion fails.

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "docinstruct/annotate/http_server.h"
#include "docinstruct/annotate/service.h"
#include "docinstruct/bench.h"
#include "docinstruct/llmdoc.h"
#include "docinstruct/metrics/answer_metrics.h"
#include "docinstruct/metrics/cider.h"
#include "docinstruct/metrics/levenshtein.h"
#include "docinstruct/mixer.h"
#include "docinstruct/prompt.h"
#include "docinstruct/random.h"
#include "docinstruct/unify.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace docinstruct {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Each check returns an empty string on success or the reason it failed.
// `detail` collects facts printed next to the verdict.
struct Criterion {
  const char* name;
  std::function<std::string(std::string& detail)> check;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// Metric oracle equivalence -------------------------------------------------

std::string check_metric_oracles(std::string& detail) {
  auto start = Clock::now();
  auto strings = oracle::all_strings(U"abc", 7);
  std::size_t pairs = 0;
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      std::size_t got = metrics::levenshtein(a, b);
      if (got != static_cast<std::size_t>(oracle::edit_distance(a, b)))
        return "levenshtein disagrees with the oracle on a pair of lengths " +
               std::to_string(a.size()) + "/" + std::to_string(b.size());
      ++pairs;
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 60.0) return fmt("exhaustive sweep took %.1f s (limit 60 s)", elapsed);

  std::vector<std::string> hello = {"Hello"};
  double a = metrics::anls("Hella", hello);
  if (a != 0.8) return fmt("anls(Hella, [Hello]) = %.17g, expected 0.8", a);

  std::vector<std::string> cands = {"a man riding a red bus", "a sign reading stop here",
                                    "two dogs on a beach"};
  std::vector<std::vector<std::string>> refs = {
      {"a man rides a red bus", "man on a red bus", "the red bus has a driver"},
      {"a stop sign on a pole", "sign that says stop here"},
      {"two dogs running on the beach", "dogs at the beach", "a pair of dogs"}};
  std::map<std::string, std::string> cm;
  std::map<std::string, std::vector<std::string>> rm;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    cm["c" + std::to_string(i)] = cands[i];
    rm["c" + std::to_string(i)] = refs[i];
  }
  double got = metrics::cider(cm, rm).corpus;
  double want = oracle::CiderOracle{}.corpus(cands, refs);
  if (std::fabs(got - want) > 1e-6) return fmt("CIDEr %.9f vs oracle %.9f", got, want);

  detail = std::to_string(pairs) + " pairs in " + fmt("%.1f s", elapsed) +
           fmt("; anls=%.1f; CIDEr %.6f (oracle %.6f)", a, got, want);
  return "";
}

// Perfect-prediction ceiling ------------------------------------------------

InstructionRecord gold(const std::string& ds, std::size_t i, std::size_t j,
                       const std::string& question, std::vector<std::string> answers) {
  InstructionRecord r;
  r.record_id = make_record_id(ds, i, j);
  r.dataset_id = ds;
  r.image_ref = ds + "/" + std::to_string(i) + ".png";
  r.question = question;
  r.answer = answers.front();
  if (answers.size() > 1) r.references = std::move(answers);
  return r;
}

std::vector<InstructionRecord> synthetic_gold(const std::string& ds, Rng& rng) {
  const char* words[] = {"total", "invoice", "Budget", "2020", "ACME Corp.", "12.5%",
                         "north", "café", "red bus", "stop"};
  auto word = [&] { return std::string(words[rng.below(10)]); };
  std::vector<InstructionRecord> out;
  auto metric = bench::binding_for(ds).metric;
  for (std::size_t i = 0; i < 40; ++i) {
    switch (metric) {
      case bench::MetricKind::kKvF1: {
        // One document per sample; some keys absent.
        const char* keys[] = {"date", "total", "vendor", "advertiser"};
        for (std::size_t k = 0; k < 4; ++k) {
          std::string value = rng.below(3) == 0 ? "None" : word() + " " + std::to_string(i);
          out.push_back(gold(ds, i, k, unify::ie_question(keys[k]), {value}));
        }
        break;
      }
      case bench::MetricKind::kVqaSoftAccuracy: {
        // Ten annotator answers; the consensus answer leads and appears at
        // least three times, as in the usual release format.
        std::string consensus = word();
        std::vector<std::string> answers(3 + rng.below(5), consensus);
        while (answers.size() < 10) answers.push_back(word());
        out.push_back(gold(ds, i, 0, "what is written here?", answers));
        break;
      }
      case bench::MetricKind::kRelaxedAccuracy:
        out.push_back(gold(ds, i, 0, "what is the value of the bar?",
                           {i % 2 ? std::to_string(rng.below(1000)) : word()}));
        break;
      case bench::MetricKind::kCider: {
        std::vector<std::string> caps;
        // Lowercase words only, so whitespace tokens match the oracle's.
        const char* plain[] = {"bus", "sign", "dog", "menu", "poster", "red", "old"};
        auto pw = [&] { return std::string(plain[rng.below(7)]); };
        for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k)
          caps.push_back("a " + pw() + " near the " + pw() + " " + pw());
        out.push_back(gold(ds, i, 0, "Describe the image briefly.", caps));
        break;
      }
      default:
        out.push_back(gold(ds, i, 0, "question " + std::to_string(i) + "?",
                           {word(), word() + " alt"}));
        break;
    }
  }
  return out;
}

std::string check_perfect_ceiling(std::string& detail) {
  Rng rng(2023);
  std::string notes;
  std::size_t exact = 0;
  for (const auto& [ds, binding] : bench::default_bindings()) {
    auto g = synthetic_gold(ds, rng);
    std::vector<bench::Prediction> preds;
    for (const auto& r : g) preds.push_back({r.record_id, r.answer});
    auto report = bench::score_run(preds, g, ds, binding);
    if (binding.metric == bench::MetricKind::kCider) {
      std::vector<std::string> cands;
      std::vector<std::vector<std::string>> refs;
      for (const auto& r : g) {
        cands.push_back(r.answer);
        refs.push_back(r.gold_answers());
      }
      double ceiling = oracle::CiderOracle{}.corpus(cands, refs) * 100.0;
      if (std::fabs(report.score - ceiling) > 1e-6)
        return ds + fmt(": %.9f vs oracle ceiling %.9f", report.score, ceiling);
      notes += " " + ds + fmt("=%.3f", report.score);
    } else if (report.score != 100.0) {
      return ds + fmt(" scored %.9f", report.score);
    } else {
      ++exact;
    }
  }
  detail = std::to_string(exact) + " datasets at exactly 100.0; CIDEr at oracle ceiling:" + notes;
  return "";
}

// Template conformance ------------------------------------------------------

std::string check_templates(std::string& detail) {
  Rng rng(1000);
  const std::regex ie_re("^What is the value for the (.+)\\?$");
  const std::vector<std::string> keys = {"date", "total amount", "vendor", "tax id",
                                         "address", "due date", "contract number"};
  std::size_t ie = 0, nli = 0, missing = 0, vqa = 0, caps = 0;
  auto pool = unify::PromptPool::defaults(3);

  for (std::size_t i = 0; i < 1000; ++i) {
    switch (i % 4) {
      case 0: {
        ingest::RawIeSample s{"f.png", {}, keys};
        for (const auto& k : keys)
          if (rng.below(2)) s.pairs[k] = "value " + std::to_string(rng.below(100));
        for (const auto& r : unify::unify_ie(s, "klc", i, true)) {
          std::smatch m;
          if (!std::regex_match(r.question, m, ie_re))
            return "IE question off-template: " + r.question;
          bool absent = !s.pairs.contains(m[1].str());
          if (absent && r.answer != "None") return "missing key answered '" + r.answer + "'";
          if (!absent && r.answer != s.pairs.at(m[1].str())) return "IE answer mismatch";
          missing += absent;
          ++ie;
        }
        break;
      }
      case 1: {
        auto label = rng.below(2) ? ingest::NliLabel::kEntailed : ingest::NliLabel::kRefuted;
        auto r = unify::unify_nli({"t.png", "the total is " + std::to_string(i), label},
                                  "tabfact", i);
        if (!r.question.ends_with(", Yes or No?")) return "NLI question: " + r.question;
        if (r.answer != (label == ingest::NliLabel::kEntailed ? "Yes" : "No"))
          return "NLI answer: " + r.answer;
        ++nli;
        break;
      }
      case 2: {
        auto r = unify::unify_vqa({"d.png", "what is the title?", {"Budget"}}, "docvqa", i);
        if (render_prompt(r) != "<image>Human:what is the title? AI:Budget")
          return "VQA prompt: " + render_prompt(r);
        ++vqa;
        break;
      }
      default: {
        auto r = unify::unify_caption({"p.png", {"a red bus"}}, "textcaps", pool, i);
        if (std::find(pool.prompts().begin(), pool.prompts().end(), r.question) ==
            pool.prompts().end())
          return "caption prompt outside pool: " + r.question;
        ++caps;
        break;
      }
    }
  }
  detail = std::to_string(ie) + " IE (" + std::to_string(missing) + " None), " +
           std::to_string(nli) + " NLI, " + std::to_string(vqa) + " VQA, " +
           std::to_string(caps) + " captioning records conform";
  return "";
}

// Mixture arithmetic --------------------------------------------------------

std::vector<std::string> ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + ":" + std::to_string(i) + ":0");
  return out;
}

std::string check_mixture(std::string& detail) {
  auto start = Clock::now();
  mixer::GroupRecords two = {{"doc", ids("doc", 100)},
                             {"language_only", ids("lang", 10)},
                             {"general_vl", ids("vl", 20)}};
  auto plan = mixer::build_plan(mixer::StageSpec::stage_two(42), two);
  if (plan.epoch_size != 280 || plan.total() != 840)
    return "stage 2: epoch " + std::to_string(plan.epoch_size) + ", total " +
           std::to_string(plan.total());
  for (const auto& [id, n] : mixer::plan_histogram(plan)) {
    std::size_t want = id.starts_with("doc") ? 3 : 18;
    if (n != want) return id + " appears " + std::to_string(n) + " times";
  }
  auto again = mixer::build_plan(mixer::StageSpec::stage_two(42), two);
  if (mixer::to_json(plan).dump() != mixer::to_json(again).dump())
    return "stage 2 plan differs between runs";

  mixer::GroupRecords one = {{"doc", ids("doc", 50)}};
  auto p1 = mixer::build_plan(mixer::StageSpec::stage_one(42), one);
  if (p1.total() != 500) return "stage 1 total " + std::to_string(p1.total());
  for (const auto& [id, n] : mixer::plan_histogram(p1))
    if (n != 10) return id + " appears " + std::to_string(n) + " times in stage 1";
  if (mixer::to_json(p1).dump() !=
      mixer::to_json(mixer::build_plan(mixer::StageSpec::stage_one(42), one)).dump())
    return "stage 1 plan differs between runs";

  double elapsed = seconds_since(start);
  if (elapsed >= 5.0) return fmt("took %.2f s (limit 5 s)", elapsed);
  detail = "stage 2: 280/840, stage 1: 500, histograms exact, byte-identical" +
           fmt(", %.3f s", elapsed);
  return "";
}

// LLMDoc protocol counts ----------------------------------------------------

std::string check_llmdoc_counts(std::string& detail) {
  auto splits = testing::synthetic_splits(45);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto draft = llmdoc::build_eval_set(splits, seed * 7919 + 1);
    std::vector<llmdoc::AnnotatorInstruction> ins;
    for (const auto& p : draft.pending) ins.push_back({p.slot_id, "Explain " + p.image_ref});
    auto items = llmdoc::attach_annotator_instructions(draft, ins);
    if (items.size() != 100) return "seed " + std::to_string(seed) + ": " +
                                    std::to_string(items.size()) + " items";
    if (auto problem = llmdoc::check_eval_set(items))
      return "seed " + std::to_string(seed) + ": " + *problem;
    std::map<std::string, std::pair<int, int>> per;  // raw, annotator
    std::map<std::string, std::set<std::string>> images;
    for (const auto& it : items) {
      auto& c = per[it.dataset];
      (it.origin == llmdoc::Origin::kRaw ? c.first : c.second)++;
      images[it.dataset].insert(it.image_ref);
    }
    if (per.size() != 5) return "wrong dataset count";
    for (const auto& [ds, c] : per)
      if (c.first != 10 || c.second != 10 || images[ds].size() != 20)
        return "seed " + std::to_string(seed) + ": " + ds + " split " +
               std::to_string(c.first) + "/" + std::to_string(c.second);
  }
  detail = "100 seeds: 100 items, 5 x (10 raw + 10 annotator), 20 distinct images each";
  return "";
}

// Human-evaluation fixture --------------------------------------------------

std::string check_human_eval(std::string& detail) {
  testing::HumanEvalFixture f;
  auto agg = llmdoc::aggregate(f.ratings, f.models, &f.items);
  std::size_t a = agg.histogram("mPLUG-DocOwl")[llmdoc::Grade::kA];
  if (a != 37) return "mPLUG-DocOwl has " + std::to_string(a) + " A grades";
  if (agg.ranking.empty() || agg.ranking[0].model_id != "mPLUG-DocOwl" ||
      agg.ranking[0].rank != 1)
    return "mPLUG-DocOwl is not ranked first";
  if (agg.ranking.size() > 1 && agg.ranking[1].rank == 1) return "first place is shared";
  for (const auto& m : f.models) {
    const auto& h = agg.histogram(m);
    if (h[llmdoc::Grade::kC] == 0 || h[llmdoc::Grade::kD] == 0)
      return m + " has no C or D grades";
  }
  detail = "A=37 for mPLUG-DocOwl, rank 1 of 3 (" + std::to_string(f.ratings.size()) +
           " log lines, " + std::to_string(agg.effective_ratings) + " effective)";
  return "";
}

// Table reproduction --------------------------------------------------------

std::string check_tables(std::string& detail) {
  struct Expect {
    const char* file;
    const char* golden;
    std::vector<std::pair<std::string, std::string>> best;  // model, column
  };
  const Expect tables[] = {
      {"baselines/due_benchmark.tsv", "table_due_benchmark.txt",
       {{"mPLUG-DocOwl", "infovqa"}, {"mPLUG-DocOwl", "klc"}, {"mPLUG-DocOwl", "wtq"},
        {"mPLUG-DocOwl", "tabfact"}, {"Pix2Struct_base", "docvqa"}, {"Donut", "deepform"}}},
      {"baselines/chart_image_web.tsv", "table_chart_image_web.txt",
       {{"mPLUG-DocOwl", "chartqa"}, {"mPLUG-DocOwl", "textvqa"},
        {"mPLUG-DocOwl", "textcaps"}, {"mPLUG-DocOwl", "visualmrc"}}},
  };
  std::size_t flags = 0;
  for (const auto& t : tables) {
    auto table = bench::compare({}, bench::load_baselines(testing::data_dir() / t.file));
    for (const auto& [model, column] : t.best) {
      auto m = std::find(table.models.begin(), table.models.end(), model) - table.models.begin();
      auto c = std::find(table.columns.begin(), table.columns.end(), column) -
               table.columns.begin();
      if (static_cast<std::size_t>(m) >= table.models.size() ||
          static_cast<std::size_t>(c) >= table.columns.size())
        return std::string(t.file) + ": no cell " + model + "/" + column;
      const auto& cell = table.rows[m][c];
      if (!cell || !cell->best) return std::string(t.file) + ": " + model + "/" + column + " not flagged";
      ++flags;
    }
    // Every flagged cell holds its column maximum.
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      double max = -1e300;
      for (const auto& row : table.rows)
        if (row[c]) max = std::max(max, row[c]->value);
      for (const auto& row : table.rows)
        if (row[c] && row[c]->best != (row[c]->value == max))
          return std::string(t.file) + ": flag disagrees with column max in " + table.columns[c];
    }
    std::string text = bench::render_text(table);
    std::string again = bench::render_text(
        bench::compare({}, bench::load_baselines(testing::data_dir() / t.file)));
    if (text != again) return std::string(t.file) + ": rendering is not stable";
    std::string golden = testing::read_file(std::filesystem::path(DOCINSTRUCT_GOLDEN_DIR) / t.golden);
    if (text != golden) return std::string(t.file) + ": rendering differs from " + t.golden;
  }
  detail = std::to_string(flags) + " expected best flags present; both tables match goldens byte for byte";
  return "";
}

// Service durability -------------------------------------------------------

std::string check_service(std::string& detail) {
  testing::TempDir dir;
  std::vector<llmdoc::Item> items;
  std::vector<annotate::ModelResponse> responses;
  const std::vector<std::string> models = {"mPLUG-DocOwl", "mPLUG-Owl", "MiniGPT-4"};
  for (int i = 1; i <= 100; ++i) {
    std::string id = "docvqa-" + std::to_string(i);
    items.push_back({id, "docvqa", id + ".png", "What does this page say?", llmdoc::Origin::kRaw});
    for (const auto& m : models) responses.push_back({id, m, m + " on " + id});
  }
  annotate::ServiceOptions options;
  options.log_path = dir / "ratings.jsonl";
  options.seed = 9;
  annotate::AnnotationService service(items, responses, options);
  annotate::HttpServer server(service);
  int port = server.bind("127.0.0.1", 0);
  std::thread listener([&] { server.listen(); });
  server.wait_until_ready();

  constexpr int kRaters = 8, kPerRater = 50;
  std::atomic<int> ok{0}, failed{0};
  std::vector<std::thread> raters;
  auto start = Clock::now();
  for (int r = 0; r < kRaters; ++r) {
    raters.emplace_back([&, r] {
      httplib::Client client("127.0.0.1", port);
      Rng rng(derive_seed(77, static_cast<std::uint64_t>(r)));
      for (int k = 0; k < kPerRater; ++k) {
        Json body = {{"rater", "rater-" + std::to_string(r)},
                     {"item", "docvqa-" + std::to_string(1 + rng.below(100))},
                     {"slot", "slot-" + std::to_string(1 + rng.below(3))},
                     {"grade", std::string(1, "ABCD"[rng.below(4)])}};
        auto res = client.Post("/api/ratings", body.dump(), "application/json");
        (res && res->status == 200 ? ok : failed)++;
      }
    });
  }
  for (auto& t : raters) t.join();
  double elapsed = seconds_since(start);

  Json summary;
  {
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/api/summary");
    if (res && res->status == 200) summary = Json::parse(res->body);
  }
  server.stop();
  listener.join();

  if (failed > 0) return std::to_string(failed.load()) + " submissions failed";
  auto lines = testing::read_lines(dir / "ratings.jsonl");
  if (lines.size() != kRaters * kPerRater)
    return "log has " + std::to_string(lines.size()) + " lines";
  for (const auto& line : lines) {
    Json obj = Json::parse(line, nullptr, false);
    if (obj.is_discarded()) return "unparseable log line: " + line;
  }
  auto log = llmdoc::read_ratings_log(dir / "ratings.jsonl");
  auto batch = llmdoc::aggregate(log, service.models());
  if (summary != llmdoc::to_json(batch)) return "live summary differs from batch aggregate";
  detail = std::to_string(ok.load()) + " acks over HTTP, " + std::to_string(lines.size()) +
           " parseable lines, summary == aggregate" + fmt(", %.2f s", elapsed);
  return "";
}

}  // namespace
}  // namespace docinstruct

int main() {
  using docinstruct::Criterion;
  const Criterion criteria[] = {
      {"metric-oracle-equivalence", docinstruct::check_metric_oracles},
      {"perfect-prediction-ceiling", docinstruct::check_perfect_ceiling},
      {"template-conformance", docinstruct::check_templates},
      {"mixture-arithmetic", docinstruct::check_mixture},
      {"llmdoc-protocol-counts", docinstruct::check_llmdoc_counts},
      {"human-eval-fixture", docinstruct::check_human_eval},
      {"table-reproduction", docinstruct::check_tables},
      {"service-durability", docinstruct::check_service},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail, error;
    try {
      error = c.check(detail);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    if (error.empty()) {
      std::printf("[PASS] %s: %s\n", c.name, detail.c_str());
    } else {
      std::printf("[FAIL] %s: %s\n", c.name, error.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
