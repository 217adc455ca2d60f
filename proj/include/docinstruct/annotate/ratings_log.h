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

#ifndef DOCINSTRUCT_ANNOTATE_RATINGS_LOG_H_
#define DOCINSTRUCT_ANNOTATE_RATINGS_LOG_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <functional>
#include <future>
#include <mutex>
#include <thread>

#include "docinstruct/llmdoc.h"

namespace docinstruct::annotate {

// Append-only ratings log with a single writer thread. Callers hand a rating
// to append(); the writer stamps it, writes its line, fsyncs, runs the commit
// hook and only then returns the stored rating. Concurrent appends are group
// committed. The file is never rewritten except to cut a torn final line left
// by a crash, which happens once at open.
class RatingsLog {
 public:
  using CommitFn = std::function<void(const llmdoc::Rating&)>;
  // Microseconds since the Unix epoch.
  using ClockFn = std::function<std::int64_t()>;

  // Throws Error(kPersistence) if the file cannot be opened for appending.
  RatingsLog(const std::filesystem::path& path, CommitFn on_commit,
             ClockFn clock = {});
  ~RatingsLog();

  RatingsLog(const RatingsLog&) = delete;
  RatingsLog& operator=(const RatingsLog&) = delete;

  // Blocks until the line is durable. The timestamp is assigned by the
  // writer and never decreases along the log. Throws Error(kPersistence) when
  // the write fails; nothing is recorded in that case.
  llmdoc::Rating append(llmdoc::Rating rating);

  std::uint64_t size_bytes() const;

 private:
  struct Job {
    llmdoc::Rating rating;
    std::promise<llmdoc::Rating> done;
  };

  void run();
  void write_batch(std::deque<Job>& batch);

  int fd_ = -1;
  std::filesystem::path path_;
  CommitFn on_commit_;
  ClockFn clock_;
  std::int64_t last_ts_ = 0;
  std::uint64_t size_ = 0;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Job> queue_;
  bool stopping_ = false;
  std::thread writer_;
};

}  // namespace docinstruct::annotate

#endif  // DOCINSTRUCT_ANNOTATE_RATINGS_LOG_H_
