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

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "docinstruct/annotate/http_server.h"
#include "docinstruct/annotate/service.h"
#include "docinstruct/bench.h"
#include "docinstruct/error.h"
#include "docinstruct/ingest.h"
#include "docinstruct/jsonl.h"
#include "docinstruct/llmdoc.h"
#include "docinstruct/mixer.h"
#include "docinstruct/types.h"
#include "docinstruct/unify.h"

namespace fs = std::filesystem;
using namespace docinstruct;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

// Dataset id from a file stem: "DocVQA_train.jsonl" -> "docvqa-train".
std::string id_from_path(const fs::path& path) {
  std::string id;
  for (char c : path.stem().string()) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    id += ok ? c : '-';
  }
  return id.empty() ? "dataset" : id;
}

TaskKind task_or_throw(const std::string& name) {
  auto task = parse_task(name);
  if (!task)
    throw Error(ErrorCode::kInvalidArgument, "unknown task '" + name + "'");
  return *task;
}

// Every unified .jsonl under a directory (sorted), or the file itself.
std::vector<InstructionRecord> read_record_tree(const fs::path& path) {
  if (!fs::is_directory(path)) return read_records(path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<InstructionRecord> out;
  for (const auto& f : files) {
    auto part = read_records(f);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

void print_config(const CLI::App& sub) {
  Json config = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->get_expected_max() == 0) {
      config[name] = opt->count() > 0;
    } else if (!opt->results().empty()) {
      const auto& values = opt->results();
      config[name] = values.size() == 1 && opt->get_expected_max() <= 1
                         ? Json(values.front())
                         : Json(values);
    } else if (!opt->get_default_str().empty()) {
      config[name] = opt->get_default_str();
    }
  }
  std::cerr << "config " << sub.get_name() << " " << config.dump() << "\n";
}

std::set<std::string> split_csv(const std::string& text) {
  std::set<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ','))
    if (!part.empty()) out.insert(part);
  return out;
}

int run_serve(const std::string& listen, const fs::path& eval,
              const fs::path& responses, const fs::path& log,
              const std::string& raters, std::uint64_t seed,
              const std::string& static_dir) {
  // Block before any thread starts so every thread inherits the mask; a
  // dedicated thread waits for the signal and stops the server.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  annotate::ServiceOptions options;
  options.log_path = log;
  options.seed = seed;
  if (!raters.empty()) options.allowed_raters = split_csv(raters);
  annotate::AnnotationService service(llmdoc::read_eval_set(eval),
                                      annotate::read_responses(responses), options);

  std::optional<fs::path> mount;
  if (!static_dir.empty()) mount = static_dir;
  annotate::HttpServer server(service, mount);
  auto [host, port] = annotate::parse_listen_address(listen);
  int bound = server.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  if (waiter.joinable()) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document instruction-tuning pipeline: ingest, unify, mix, "
               "score, compare, LLMDoc evaluation and rating service."};
  app.require_subcommand(1);
  std::function<int()> action;

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Load and validate one raw dataset file");
  std::string ingest_task, ingest_id, ingest_root, ingest_out;
  fs::path ingest_in;
  bool verify_images = false;
  ingest_cmd->add_option("--task", ingest_task, "vqa|ie|nli|captioning|language_only|general_vl")->required();
  ingest_cmd->add_option("--in", ingest_in, "Canonical jsonl file")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--dataset", ingest_id, "Dataset id (default: input file stem)");
  ingest_cmd->add_flag("--verify-images", verify_images, "Fail when image files are missing");
  ingest_cmd->add_option("--image-root", ingest_root, "Directory image paths resolve against");
  ingest_cmd->add_option("--out", ingest_out, "Write the summary JSON here");
  ingest_cmd->callback([&] {
    action = [&] {
      DatasetDescriptor d{ingest_id.empty() ? id_from_path(ingest_in) : ingest_id,
                          task_or_throw(ingest_task), DomainKind::kDocument,
                          Split::kTrain, ingest_in};
      auto raw = ingest::load_dataset(d);
      Json summary = {{"dataset", d.id},
                      {"task", std::string(to_string(d.task))},
                      {"samples", ingest::sample_count(raw)}};
      if (verify_images) {
        auto missing = ingest::find_missing_images(
            raw, ingest_root.empty() ? ingest_in.parent_path() : fs::path(ingest_root));
        summary["missing_images"] = missing;
        if (!missing.empty()) {
          std::cerr << "error: " << missing.size() << " image file(s) missing, first: "
                    << missing.front() << "\n";
          std::cout << summary.dump() << "\n";
          return kDataError;
        }
      }
      if (!ingest_out.empty()) write_text_file(ingest_out, summary.dump(2) + "\n");
      std::cout << summary.dump() << "\n";
      return 0;
    };
  });

  // unify
  auto* unify_cmd = app.add_subcommand("unify", "Convert a raw dataset file to unified instruction records");
  std::string unify_task, unify_id, unify_prompts;
  fs::path unify_in, unify_out;
  std::uint64_t unify_seed = 0;
  std::size_t missing_cap = 4;
  bool no_missing = false, no_cap = false;
  unify_cmd->add_option("--task", unify_task, "vqa|ie|nli|captioning|language_only|general_vl")->required();
  unify_cmd->add_option("--in", unify_in, "Canonical jsonl file")->required()->check(CLI::ExistingFile);
  unify_cmd->add_option("--out", unify_out, "Unified jsonl output")->required();
  unify_cmd->add_option("--dataset", unify_id, "Dataset id (default: input file stem)");
  unify_cmd->add_option("--seed", unify_seed, "Seed for caption prompts and missing-key sampling")->capture_default_str();
  unify_cmd->add_option("--missing-cap", missing_cap, "IE: max absent keys kept per sample")->capture_default_str();
  unify_cmd->add_flag("--no-missing-cap", no_cap, "IE: keep every absent key");
  unify_cmd->add_flag("--no-missing", no_missing, "IE: drop absent keys entirely");
  unify_cmd->add_option("--prompts", unify_prompts, "Captioning prompt pool, one per line");
  unify_cmd->callback([&] {
    action = [&] {
      DatasetDescriptor d{unify_id.empty() ? id_from_path(unify_in) : unify_id,
                          task_or_throw(unify_task), DomainKind::kDocument,
                          Split::kTrain, unify_in};
      unify::UnifyOptions options;
      options.include_missing = !no_missing;
      options.missing_key_cap = no_cap ? std::nullopt : std::optional(missing_cap);
      options.seed = unify_seed;
      if (!unify_prompts.empty())
        options.caption_prompts = unify::PromptPool::load(unify_prompts, unify_seed).prompts();
      auto records = unify::unify_dataset(ingest::load_dataset(d), d, options);
      write_records(unify_out, records);
      std::cout << "wrote " << records.size() << " records to " << unify_out.string() << "\n";
      return 0;
    };
  });

  // mix
  auto* mix_cmd = app.add_subcommand("mix", "Build a stage mixture plan and write shards");
  int mix_stage = 1;
  std::string mix_doc, mix_lang, mix_vl, mix_registry;
  fs::path mix_out;
  std::uint64_t mix_seed = 0;
  std::size_t shard_size = 10000;
  mix_cmd->add_option("--stage", mix_stage, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  mix_cmd->add_option("--doc", mix_doc, "Unified document records (file or directory)")->required();
  mix_cmd->add_option("--lang", mix_lang, "Unified language-only records (stage 2)");
  mix_cmd->add_option("--vl", mix_vl, "Unified general vision-language records (stage 2)");
  mix_cmd->add_option("--out", mix_out, "Output directory for shards and manifest.json")->required();
  mix_cmd->add_option("--seed", mix_seed, "Shuffle seed")->capture_default_str();
  mix_cmd->add_option("--shard-size", shard_size, "Records per shard")->capture_default_str();
  mix_cmd->add_option("--registry", mix_registry, "Dataset registry; rejects test-split records");
  mix_cmd->callback([&] {
    action = [&] {
      mixer::StageSpec spec = mix_stage == 1 ? mixer::StageSpec::stage_one(mix_seed)
                                             : mixer::StageSpec::stage_two(mix_seed);
      std::vector<std::pair<std::string, std::string>> inputs = {
          {std::string(mixer::kDocGroup), mix_doc},
          {std::string(mixer::kLanguageOnlyGroup), mix_lang},
          {std::string(mixer::kGeneralVlGroup), mix_vl}};
      mixer::GroupRecords groups;
      std::unordered_map<std::string, InstructionRecord> by_id;
      std::vector<InstructionRecord> all;
      for (const auto& [group, path] : inputs) {
        bool wanted = std::any_of(spec.groups.begin(), spec.groups.end(),
                                  [&](const auto& g) { return g.group_id == group; });
        if (path.empty() || !wanted) continue;
        auto records = read_record_tree(path);
        auto& ids = groups[group];
        for (auto& r : records) {
          ids.push_back(r.record_id);
          all.push_back(r);
          by_id.emplace(r.record_id, std::move(r));
        }
      }
      if (!mix_registry.empty()) mixer::check_train_only(all, ingest::load_registry(mix_registry));
      auto plan = mixer::build_plan(spec, groups);
      auto manifest = mixer::emit_shards(plan, by_id, shard_size, mix_out);
      std::cout << "epoch_size " << plan.epoch_size << " total " << plan.total()
                << " shards " << manifest.shards.size() << "\n";
      return 0;
    };
  });

  // report-composition
  auto* comp_cmd = app.add_subcommand("report-composition", "Count samples per task and domain over a registry");
  std::string comp_registry, comp_out;
  comp_cmd->add_option("--registry", comp_registry, "Registry JSON")->required()->check(CLI::ExistingFile);
  comp_cmd->add_option("--out", comp_out, "Write the report JSON here");
  comp_cmd->callback([&] {
    action = [&] {
      auto report = ingest::composition_report(ingest::load_registry(comp_registry));
      std::string text = ingest::to_json(report).dump(2) + "\n";
      if (!comp_out.empty()) write_text_file(comp_out, text);
      std::cout << text;
      return 0;
    };
  });

  // score
  auto* score_cmd = app.add_subcommand("score", "Score predictions against unified gold records");
  std::string score_dataset, score_model = "run", score_out;
  fs::path score_pred, score_gold;
  bool per_sample = false;
  score_cmd->add_option("--dataset", score_dataset, "Benchmark dataset id")->required();
  score_cmd->add_option("--pred", score_pred, "Predictions jsonl {record_id, prediction}")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--gold", score_gold, "Unified gold records")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--model", score_model, "Model name for the report")->capture_default_str();
  score_cmd->add_option("--out", score_out, "Write the report JSON here");
  score_cmd->add_flag("--per-sample", per_sample, "Include per-sample values in the report");
  score_cmd->callback([&] {
    action = [&] {
      auto report = bench::score_run(bench::read_predictions(score_pred),
                                     read_records(score_gold), score_dataset,
                                     bench::binding_for(score_dataset), per_sample);
      report.model = score_model;
      if (!score_out.empty()) write_text_file(score_out, bench::to_json(report).dump(2) + "\n");
      char line[128];
      std::snprintf(line, sizeof(line), "%s %s %.1f (n=%zu, unanswered=%zu)\n",
                    report.dataset.c_str(),
                    std::string(bench::to_string(report.metric)).c_str(),
                    report.score, report.n_samples, report.unanswered);
      std::cout << line;
      if (!report.note.empty()) std::cout << "note: " << report.note << "\n";
      return 0;
    };
  });

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Merge run reports with a baseline table");
  std::string cmp_baselines, cmp_text_out, cmp_jsonl_out;
  std::vector<std::string> cmp_reports;
  cmp_cmd->add_option("--baselines", cmp_baselines, "Baseline TSV")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--report", cmp_reports, "Report JSON from score (repeatable)");
  cmp_cmd->add_option("--out-text", cmp_text_out, "Write the aligned table here");
  cmp_cmd->add_option("--out-jsonl", cmp_jsonl_out, "Write the table as JSONL here");
  cmp_cmd->callback([&] {
    action = [&] {
      std::vector<bench::MetricReport> reports;
      for (const auto& path : cmp_reports) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
        Json obj = Json::parse(in, nullptr, false);
        if (obj.is_discarded())
          throw Error(ErrorCode::kSchema, path + ": not valid JSON");
        reports.push_back(bench::report_from_json(obj));
      }
      auto table = bench::compare(reports, bench::load_baselines(cmp_baselines));
      std::string text = bench::render_text(table);
      if (!cmp_text_out.empty()) write_text_file(cmp_text_out, text);
      if (!cmp_jsonl_out.empty()) write_text_file(cmp_jsonl_out, bench::render_jsonl(table));
      std::cout << text;
      return 0;
    };
  });

  // llmdoc-build
  auto* build_cmd = app.add_subcommand("llmdoc-build", "Sample LLMDoc images and raw instructions from test splits");
  fs::path build_dir, build_raw, build_pending;
  std::uint64_t build_seed = 0;
  build_cmd->add_option("--test-dir", build_dir, "Directory with <dataset>.jsonl unified test splits")->required()->check(CLI::ExistingDirectory);
  build_cmd->add_option("--seed", build_seed, "Sampling seed")->capture_default_str();
  build_cmd->add_option("--raw-out", build_raw, "Raw items jsonl output")->required();
  build_cmd->add_option("--pending-out", build_pending, "Pending annotator slots jsonl output")->required();
  build_cmd->callback([&] {
    action = [&] {
      std::vector<llmdoc::TestSplit> splits;
      for (auto name : llmdoc::kSourceDatasets) {
        fs::path file = build_dir / (std::string(name) + ".jsonl");
        splits.push_back({std::string(name), read_records(file)});
      }
      auto draft = llmdoc::build_eval_set(splits, build_seed);
      llmdoc::write_eval_set(build_raw, draft.raw_items);
      llmdoc::write_pending(build_pending, draft.pending);
      std::cout << "raw " << draft.raw_items.size() << " pending "
                << draft.pending.size() << "\n";
      return 0;
    };
  });

  // llmdoc-attach
  auto* attach_cmd = app.add_subcommand("llmdoc-attach", "Merge annotator instructions into the final eval set");
  fs::path attach_raw, attach_pending, attach_instr, attach_out;
  attach_cmd->add_option("--raw", attach_raw, "Raw items from llmdoc-build")->required()->check(CLI::ExistingFile);
  attach_cmd->add_option("--pending", attach_pending, "Pending slots from llmdoc-build")->required()->check(CLI::ExistingFile);
  attach_cmd->add_option("--instructions", attach_instr, "Annotator instructions {slot_id, instruction}")->required()->check(CLI::ExistingFile);
  attach_cmd->add_option("--out", attach_out, "Eval set jsonl output")->required();
  attach_cmd->callback([&] {
    action = [&] {
      llmdoc::EvalSetDraft draft{llmdoc::read_eval_set(attach_raw),
                                 llmdoc::read_pending(attach_pending)};
      auto items = llmdoc::attach_annotator_instructions(
          draft, llmdoc::read_instructions(attach_instr));
      llmdoc::write_eval_set(attach_out, items);
      std::cout << "wrote " << items.size() << " items to " << attach_out.string() << "\n";
      return 0;
    };
  });

  // llmdoc-aggregate
  auto* agg_cmd = app.add_subcommand("llmdoc-aggregate", "Grade histograms and ranking from a ratings log");
  fs::path agg_log;
  std::string agg_models, agg_eval, agg_out;
  agg_cmd->add_option("--log", agg_log, "Ratings log jsonl")->required()->check(CLI::ExistingFile);
  agg_cmd->add_option("--models", agg_models, "Comma-separated model ids (default: order of appearance)");
  agg_cmd->add_option("--eval", agg_eval, "Eval set; rejects ratings for unknown items");
  agg_cmd->add_option("--out", agg_out, "Write the aggregate JSON here");
  agg_cmd->callback([&] {
    action = [&] {
      auto ratings = llmdoc::read_ratings_log(agg_log);
      std::vector<std::string> models;
      if (!agg_models.empty()) {
        std::stringstream in(agg_models);
        std::string m;
        while (std::getline(in, m, ','))
          if (!m.empty()) models.push_back(m);
      } else {
        for (const auto& r : ratings)
          if (std::find(models.begin(), models.end(), r.model_id) == models.end())
            models.push_back(r.model_id);
      }
      std::set<std::string> known;
      if (!agg_eval.empty())
        for (const auto& item : llmdoc::read_eval_set(agg_eval)) known.insert(item.item_id);
      auto result = llmdoc::aggregate(ratings, models, agg_eval.empty() ? nullptr : &known);
      std::string text = llmdoc::to_json(result).dump(2) + "\n";
      if (!agg_out.empty()) write_text_file(agg_out, text);
      std::cout << text;
      return 0;
    };
  });

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the blind rating service");
  std::string serve_listen = "127.0.0.1:8080", serve_raters, serve_static;
  fs::path serve_eval, serve_responses, serve_log;
  std::uint64_t serve_seed = 0;
  serve_cmd->add_option("--listen", serve_listen, "host:port (port 0 picks a free port)")->envname("DOCINSTRUCT_LISTEN")->capture_default_str();
  serve_cmd->add_option("--eval", serve_eval, "Eval set jsonl")->envname("DOCINSTRUCT_EVAL")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--responses", serve_responses, "Model responses jsonl {item_id, model_id, response}")->envname("DOCINSTRUCT_RESPONSES")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--log", serve_log, "Append-only ratings log")->envname("DOCINSTRUCT_LOG")->required();
  serve_cmd->add_option("--raters", serve_raters, "Comma-separated allowed rater ids (default: any)")->envname("DOCINSTRUCT_RATERS");
  serve_cmd->add_option("--seed", serve_seed, "Slot permutation seed")->envname("DOCINSTRUCT_SEED")->capture_default_str();
  serve_cmd->add_option("--static-dir", serve_static, "Serve the rater UI build from here")->envname("DOCINSTRUCT_STATIC_DIR");
  serve_cmd->callback([&] {
    action = [&] {
      return run_serve(serve_listen, serve_eval, serve_responses, serve_log,
                       serve_raters, serve_seed, serve_static);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  for (const CLI::App* sub : app.get_subcommands()) print_config(*sub);
  try {
    return action ? action() : kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}
