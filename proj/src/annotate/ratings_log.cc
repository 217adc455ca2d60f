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

#include "docinstruct/annotate/ratings_log.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "docinstruct/error.h"

namespace docinstruct::annotate {

namespace {

std::int64_t system_micros() {
  using namespace std::chrono;
  return duration_cast<microseconds>(system_clock::now().time_since_epoch())
      .count();
}

Error persistence_error(const std::string& what, int err) {
  return Error(ErrorCode::kPersistence, what + ": " + std::strerror(err));
}

}  // namespace

RatingsLog::RatingsLog(const std::filesystem::path& path, CommitFn on_commit,
                       ClockFn clock)
    : path_(path),
      on_commit_(std::move(on_commit)),
      clock_(clock ? std::move(clock) : ClockFn(system_micros)) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw persistence_error("cannot open " + path.string(), errno);

  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    int err = errno;
    ::close(fd_);
    throw persistence_error("cannot stat " + path.string(), err);
  }
  if (S_ISREG(st.st_mode) && st.st_size > 0) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string data = buf.str();
    auto last = data.rfind('\n');
    std::uint64_t keep = last == std::string::npos ? 0 : last + 1;
    if (keep != data.size() && ::ftruncate(fd_, static_cast<off_t>(keep)) != 0) {
      int err = errno;
      ::close(fd_);
      throw persistence_error("cannot cut torn tail of " + path.string(), err);
    }
    size_ = keep;
    for (const auto& r : llmdoc::read_ratings_log(path))
      last_ts_ = std::max(last_ts_, llmdoc::parse_timestamp(r.timestamp).value_or(0));
  }
  writer_ = std::thread([this] { run(); });
}

RatingsLog::~RatingsLog() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (writer_.joinable()) writer_.join();
  if (fd_ >= 0) ::close(fd_);
}

llmdoc::Rating RatingsLog::append(llmdoc::Rating rating) {
  std::future<llmdoc::Rating> result;
  {
    std::lock_guard lock(mu_);
    if (stopping_)
      throw Error(ErrorCode::kPersistence, "ratings log is shutting down");
    queue_.push_back(Job{std::move(rating), {}});
    result = queue_.back().done.get_future();
  }
  cv_.notify_one();
  return result.get();
}

std::uint64_t RatingsLog::size_bytes() const {
  std::lock_guard lock(mu_);
  return size_;
}

void RatingsLog::run() {
  for (;;) {
    std::deque<Job> batch;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      batch.swap(queue_);
    }
    write_batch(batch);
  }
}

void RatingsLog::write_batch(std::deque<Job>& batch) {
  std::string buffer;
  std::int64_t ts = last_ts_;
  for (auto& job : batch) {
    ts = std::max(ts, clock_());
    job.rating.timestamp = llmdoc::format_timestamp(ts);
    buffer += to_jsonl_line(llmdoc::to_json(job.rating));
  }

  std::uint64_t before;
  {
    std::lock_guard lock(mu_);
    before = size_;
  }
  int err = 0;
  std::size_t written = 0;
  while (written < buffer.size()) {
    ssize_t n = ::write(fd_, buffer.data() + written, buffer.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      err = errno;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  if (err == 0 && ::fsync(fd_) != 0 && errno != EINVAL) err = errno;

  if (err != 0) {
    // Best effort: a failed cut leaves a torn line that the next open removes.
    if (written > 0 && ::ftruncate(fd_, static_cast<off_t>(before)) != 0) {
    }
    auto failure = std::make_exception_ptr(
        persistence_error("append to " + path_.string() + " failed", err));
    for (auto& job : batch) job.done.set_exception(failure);
    return;
  }

  last_ts_ = ts;
  {
    std::lock_guard lock(mu_);
    size_ = before + buffer.size();
  }
  for (auto& job : batch) {
    if (on_commit_) on_commit_(job.rating);
    job.done.set_value(job.rating);
  }
}

}  // namespace docinstruct::annotate
