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

#ifndef DOCINSTRUCT_TESTS_SUPPORT_FIXTURES_H_
#define DOCINSTRUCT_TESTS_SUPPORT_FIXTURES_H_

#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "docinstruct/llmdoc.h"
#include "docinstruct/types.h"

namespace docinstruct::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("docinstruct-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

inline std::filesystem::path data_dir() { return DOCINSTRUCT_DATA_DIR; }

// A test split with `images` distinct images and `per_image` questions each.
inline llmdoc::TestSplit synthetic_split(const std::string& dataset,
                                         std::size_t images,
                                         std::size_t per_image = 2) {
  llmdoc::TestSplit split{dataset, {}};
  for (std::size_t i = 0; i < images; ++i) {
    for (std::size_t q = 0; q < per_image; ++q) {
      InstructionRecord r;
      r.record_id = make_record_id(dataset, i, q);
      r.dataset_id = dataset;
      r.image_ref = dataset + "/img" + std::to_string(i) + ".png";
      r.question = "question " + std::to_string(q) + " about image " + std::to_string(i);
      r.answer = "answer";
      split.records.push_back(std::move(r));
    }
  }
  return split;
}

inline std::vector<llmdoc::TestSplit> synthetic_splits(std::size_t images) {
  std::vector<llmdoc::TestSplit> out;
  for (auto name : llmdoc::kSourceDatasets)
    out.push_back(synthetic_split(std::string(name), images));
  return out;
}

// Three-model human evaluation outcome over 100 items, one rater. Only
// mPLUG-DocOwl's 37 A grades are published; the rest of each distribution is
// made up, keeping every model with some C and D grades. The first ten
// DocOwl items are first graded D and later regraded A, so the latest-wins
// rule is exercised.
struct HumanEvalFixture {
  std::vector<std::string> models{"mPLUG-DocOwl", "mPLUG-Owl", "MiniGPT-4"};
  // Rows follow `models`; columns are A, B, C, D.
  std::array<std::array<std::size_t, 4>, 3> counts{{
      {37, 33, 18, 12},
      {25, 31, 26, 18},
      {18, 27, 32, 23},
  }};
  std::vector<llmdoc::Rating> ratings;
  std::set<std::string> items;

  HumanEvalFixture() {
    std::vector<std::string> item_ids;
    for (auto name : llmdoc::kSourceDatasets)
      for (int i = 1; i <= 20; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s-%02d", std::string(name).c_str(), i);
        item_ids.push_back(buf);
        items.insert(buf);
      }
    std::int64_t ts = 1'700'000'000'000'000;
    for (std::size_t m = 0; m < models.size(); ++m) {
      std::size_t item = 0;
      for (std::size_t g = 0; g < 4; ++g) {
        for (std::size_t k = 0; k < counts[m][g]; ++k, ++item) {
          ratings.push_back({item_ids[item], models[m], "rater-1",
                             static_cast<llmdoc::Grade>(g),
                             llmdoc::format_timestamp(ts += 1000)});
        }
      }
    }
    // Superseded first impressions, older than everything above.
    std::int64_t early = 1'600'000'000'000'000;
    for (std::size_t i = 0; i < 10; ++i) {
      ratings.push_back({item_ids[i], models[0], "rater-1", llmdoc::Grade::kD,
                         llmdoc::format_timestamp(early + static_cast<std::int64_t>(i))});
    }
  }
};

}  // namespace docinstruct::testing

#endif  // DOCINSTRUCT_TESTS_SUPPORT_FIXTURES_H_
