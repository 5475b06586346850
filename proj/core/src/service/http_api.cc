// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "triage/service/http_api.h"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include <httplib.h>

#include "triage/common/json_io.h"

namespace triage::service {

namespace {

constexpr std::size_t kMaxBodyBytes = 4u << 20;
constexpr std::size_t kDefaultPageLimit = 50;
constexpr std::size_t kMaxPageLimit = 500;

void SendJson(httplib::Response& res, int status, Json const& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void SendError(httplib::Response& res, int status, std::string_view code,
               std::string const& message) {
  SendJson(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

// A body that is not JSON at all; reported as PARSE rather than as a shape error.
struct MalformedBody : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json ParseBody(httplib::Request const& req) {
  try {
    return Json::parse(req.body);
  } catch (Json::exception const& e) {
    throw MalformedBody(std::string("request body: ") + e.what());
  }
}

// Schema errors raised while decoding a request are the caller's fault.
ErrorCode RequestErrorCode(ErrorCode code) {
  return code == ErrorCode::kConfig || code == ErrorCode::kParse ? ErrorCode::kInvalidArgument
                                                                  : code;
}

std::size_t QuerySize(httplib::Request const& req, char const* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  auto const raw = req.get_param_value(key);
  try {
    std::size_t used = 0;
    auto const v = std::stoull(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(key);
    return static_cast<std::size_t>(v);
  } catch (std::exception const&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad ") + key + " '" + raw + "'");
  }
}

using Handler = std::function<void(httplib::Request const&, httplib::Response&)>;

// Maps library errors onto the JSON error envelope.
httplib::Server::Handler Guard(Handler h) {
  return [h = std::move(h)](httplib::Request const& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (MalformedBody const& e) {
      SendError(res, 400, ErrorCodeName(ErrorCode::kParse), e.what());
    } catch (Error const& e) {
      auto const code = RequestErrorCode(e.code());
      SendError(res, HttpStatusFor(code), ErrorCodeName(code), e.what());
    } catch (Json::exception const& e) {
      SendError(res, 400, ErrorCodeName(ErrorCode::kInvalidArgument), e.what());
    } catch (std::exception const& e) {
      SendError(res, 500, "INTERNAL", e.what());
    }
  };
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidLabelSet:
    case ErrorCode::kParse:
    case ErrorCode::kMismatchedIds:
    case ErrorCode::kUnlabeledRecord:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kWrongState:
    case ErrorCode::kUnevenRaters:
    case ErrorCode::kDegenerateMarginals:
    case ErrorCode::kWrongVoteCount:
    case ErrorCode::kNoRemainingQuestions:
      return 409;
    case ErrorCode::kBackendUnavailable:
      return 503;
    case ErrorCode::kConfig:
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

struct HttpApi::Impl {
  explicit Impl(TriageService& s) : service(s) {}

  void Routes();

  TriageService& service;
  httplib::Server server;
};

void HttpApi::Impl::Routes() {
  auto& svc = service;
  server.set_payload_max_length(kMaxBodyBytes);
  auto const threads = svc.config().http_threads;
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  auto const token = svc.config().api_token;
  server.set_pre_routing_handler([token](httplib::Request const& req, httplib::Response& res) {
    if (token.empty() || req.path == "/v1/health") return httplib::Server::HandlerResponse::Unhandled;
    if (req.get_header_value("Authorization") != "Bearer " + token) {
      SendError(res, 401, "UNAUTHORIZED", "missing or wrong bearer token");
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  server.Get("/v1/health", Guard([&svc](auto const&, auto& res) {
               SendJson(res, 200, svc.Health());
             }));

  server.Post("/v1/messages", Guard([&svc](auto const& req, auto& res) {
                auto const body = ParseBody(req);
                RejectUnknownKeys(body, {"user_id", "text"}, "message");
                auto const text = RequireMember(body, "text").template get<std::string>();
                auto const user = body.value("user_id", std::string());
                auto const result = svc.PostMessage(user, text);
                SendJson(res, result.classified ? 200 : 503, MessageResultToJson(result));
              }));

  server.Post(R"(/v1/sessions/([^/]+)/reply)", Guard([&svc](auto const& req, auto& res) {
                auto const body = ParseBody(req);
                RejectUnknownKeys(body, {"text"}, "reply");
                auto const text = RequireMember(body, "text").template get<std::string>();
                auto const result = svc.PostReply(req.matches[1], text);
                auto doc = MessageResultToJson(result);
                doc["session"] = risk::SessionToJson(svc.GetSession(req.matches[1]));
                SendJson(res, result.classified ? 200 : 503, doc);
              }));

  server.Get(R"(/v1/sessions/([^/]+))", Guard([&svc](auto const& req, auto& res) {
               SendJson(res, 200, risk::SessionToJson(svc.GetSession(req.matches[1])));
             }));

  server.Post("/v1/batches", Guard([&svc](auto const& req, auto& res) {
                SendJson(res, 201, svc.CreateBatch(ParseBody(req)));
              }));

  server.Get(R"(/v1/batches/([^/]+)/page)", Guard([&svc](auto const& req, auto& res) {
               auto const annotator = req.get_param_value("annotator");
               auto const offset = QuerySize(req, "offset", 0);
               auto const limit =
                   std::min(QuerySize(req, "limit", kDefaultPageLimit), kMaxPageLimit);
               SendJson(res, 200, svc.Page(req.matches[1], annotator, offset, limit));
             }));

  server.Post(R"(/v1/batches/([^/]+)/votes)", Guard([&svc](auto const& req, auto& res) {
                SendJson(res, 200, svc.SubmitVotes(req.matches[1], ParseBody(req)));
              }));

  server.Post(R"(/v1/batches/([^/]+)/close)", Guard([&svc](auto const& req, auto& res) {
                SendJson(res, 200, svc.CloseBatch(req.matches[1]));
              }));

  server.Get(R"(/v1/batches/([^/]+)/kappa)", Guard([&svc](auto const& req, auto& res) {
               SendJson(res, 200, svc.BatchKappa(req.matches[1]));
             }));

  server.Get("/v1/discussions", Guard([&svc](auto const&, auto& res) {
               SendJson(res, 200, svc.Discussions());
             }));

  server.Post(R"(/v1/discussions/([^/]+)/resolution)",
              Guard([&svc](auto const& req, auto& res) {
                SendJson(res, 200, svc.SubmitResolution(req.matches[1], ParseBody(req)));
              }));

  server.Get("/v1/export", Guard([&svc](auto const&, auto& res) {
               res.status = 200;
               res.set_content(svc.ExportJsonl(), "application/x-ndjson; charset=utf-8");
             }));

  server.Get("/v1/state/snapshot", Guard([&svc](auto const&, auto& res) {
               SendJson(res, 200, svc.Snapshot());
             }));

  server.set_error_handler([](httplib::Request const& req, httplib::Response& res) {
    // Only fill in bodies for statuses no handler produced.
    if (!res.body.empty()) return;
    if (res.status == 404) {
      SendError(res, 404, ErrorCodeName(ErrorCode::kNotFound), "no route for " + req.path);
    } else if (res.status == 413) {
      SendError(res, 413, ErrorCodeName(ErrorCode::kInvalidArgument), "request body too large");
    }
  });
}

HttpApi::HttpApi(TriageService& service) : impl_(std::make_unique<Impl>(service)) {
  impl_->Routes();
}

HttpApi::~HttpApi() { Stop(); }

int HttpApi::Bind(std::string const& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpApi::Serve() { impl_->server.listen_after_bind(); }

void HttpApi::Stop() { impl_->server.stop(); }

}  // namespace triage::service
