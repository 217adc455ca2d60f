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

#ifndef DOCINSTRUCT_ANNOTATE_HTTP_SERVER_H_
#define DOCINSTRUCT_ANNOTATE_HTTP_SERVER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "docinstruct/annotate/service.h"

namespace httplib {
class Server;
}

namespace docinstruct::annotate {

// JSON endpoints over an AnnotationService:
//   GET  /api/items/next?rater=<id>
//   POST /api/ratings        {"rater", "item", "slot", "grade"}
//   GET  /api/summary
//   GET  /api/health
// Errors come back as {"error": <code name>, "message": str}.
class HttpServer {
 public:
  explicit HttpServer(AnnotationService& service,
                      std::optional<std::filesystem::path> static_dir = {});
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port; port 0 picks a free one. Throws on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  AnnotationService& service_;
  std::unique_ptr<httplib::Server> server_;
};

// "host:port" -> (host, port). Throws Error(kInvalidArgument).
std::pair<std::string, int> parse_listen_address(const std::string& address);

}  // namespace docinstruct::annotate

#endif  // DOCINSTRUCT_ANNOTATE_HTTP_SERVER_H_
