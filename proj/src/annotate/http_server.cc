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

#include "docinstruct/annotate/http_server.h"

#include <charconv>

#include <httplib.h>

#include "docinstruct/error.h"

namespace docinstruct::annotate {

namespace {

constexpr const char* kJson = "application/json";

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownRater: return 403;
    case ErrorCode::kUnknownItem:
    case ErrorCode::kUnknownSlot: return 404;
    case ErrorCode::kPersistence: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status(e.code()),
            {{"error", std::string(error_code_name(e.code()))},
             {"message", e.what()}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, e);
  } catch (const std::exception& e) {
    send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
  }
}

std::string body_string(const Json& body, const char* field) {
  auto it = body.find(field);
  if (it == body.end() || !it->is_string())
    throw Error(ErrorCode::kInvalidArgument,
                std::string("request body needs string field '") + field + "'");
  return it->get<std::string>();
}

}  // namespace

HttpServer::HttpServer(AnnotationService& service,
                       std::optional<std::filesystem::path> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  server_->Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server_->Get("/api/items/next",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   auto next = service_.next_item(req.get_param_value("rater"));
                   send_json(res, 200, next ? to_json(*next) : Json{{"done", true}});
                 });
               });

  server_->Post("/api/ratings",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    Json body = Json::parse(req.body, nullptr, false);
                    if (body.is_discarded() || !body.is_object())
                      throw Error(ErrorCode::kInvalidArgument,
                                  "request body must be a JSON object");
                    SubmitAck ack = service_.submit_rating(
                        body_string(body, "rater"), body_string(body, "item"),
                        body_string(body, "slot"), body_string(body, "grade"));
                    send_json(res, 200, to_json(ack));
                  });
                });

  server_->Get("/api/summary", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, llmdoc::to_json(service_.summary())); });
  });

  if (static_dir) server_->set_mount_point("/", static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = server_->bind_to_any_port(host);
    if (bound < 0)
      throw Error(ErrorCode::kInvalidArgument, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port))
    throw Error(ErrorCode::kInvalidArgument,
                "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

std::pair<std::string, int> parse_listen_address(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0)
    throw Error(ErrorCode::kInvalidArgument,
                "listen address must look like host:port, got '" + address + "'");
  std::string host = address.substr(0, colon);
  int port = -1;
  const char* first = address.data() + colon + 1;
  const char* last = address.data() + address.size();
  auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || ptr != last || port < 0 || port > 65535)
    throw Error(ErrorCode::kInvalidArgument,
                "bad port in listen address '" + address + "'");
  return {host, port};
}

}  // namespace docinstruct::annotate
