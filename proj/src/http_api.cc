// Copyright 2026 The Facetalk Authors
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

#include "facetalk/http_api.h"

#include "httplib.h"

namespace facetalk {
namespace {

void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  Reply(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

nlohmann::json ParseBody(const httplib::Request& req) {
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("request body is not JSON: " + std::string(e.what()), e.byte);
  }
}

// Runs a handler, mapping library errors onto the error envelope.
template <typename F>
httplib::Server::Handler Guard(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ValidationError& e) {
      nlohmann::json body = {{"error",
                              {{"code", ErrorCodeName(e.code())},
                               {"message", e.what()},
                               {"findings", e.findings()}}}};
      Reply(res, HttpStatusFor(e.code()), body);
    } catch (const Error& e) {
      ReplyError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      ReplyError(res, 400, ErrorCodeName(ErrorCode::kParse), e.what());
    } catch (const std::exception& e) {
      ReplyError(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kIo: return 500;
    default: return 400;
  }
}

struct HttpServer::Impl {
  SessionManager& manager;
  httplib::Server server;
  explicit Impl(SessionManager& m) : manager(m) {}
};

HttpServer::HttpServer(SessionManager& manager)
    : impl_(std::make_unique<Impl>(manager)) {
  auto& server = impl_->server;
  SessionManager& m = manager;
  server.set_payload_max_length(64u << 20);

  server.Post("/kbs", Guard([&m](const httplib::Request& req, httplib::Response& res) {
    KnowledgeBase kb = LoadKnowledgeBase(req.body);
    std::string id = m.AddDomain(MakeDomain(std::move(kb)));
    Reply(res, 201, {{"kb_id", id}});
  }));

  server.Get(R"(/kbs/([^/]+)/facets)",
             Guard([&m](const httplib::Request& req, httplib::Response& res) {
               auto domain = m.FindDomain(req.matches[1].str());
               if (!domain) {
                 throw Error(ErrorCode::kNotFound, "unknown kb '" + req.matches[1].str() + "'");
               }
               std::string expr =
                   req.has_param("constraints") ? req.get_param_value("constraints") : "";
               auto cs = ParseConstraintList(expr, *domain->kb);
               ResultSet rs = Filter(*domain->kb, cs);
               Reply(res, 200,
                     {{"kb_id", domain->kb->id()},
                      {"count", rs.ids.size()},
                      {"ids", rs.ids},
                      {"facets", FacetCountsJson(rs.facets)}});
             }));

  server.Post("/sessions",
              Guard([&m](const httplib::Request& req, httplib::Response& res) {
                auto body = ParseBody(req);
                if (!body.is_object() || !body.contains("kb_id") ||
                    !body["kb_id"].is_string()) {
                  throw Error(ErrorCode::kValidation, "body needs a string 'kb_id'");
                }
                auto created = m.CreateSession(body["kb_id"].get<std::string>());
                Reply(res, 201,
                      {{"session_id", created.session_id}, {"greeting", created.greeting}});
              }));

  server.Post(R"(/sessions/([^/]+)/turns)",
              Guard([&m](const httplib::Request& req, httplib::Response& res) {
                auto body = ParseBody(req);
                if (!body.is_object() || !body.contains("text") ||
                    !body["text"].is_string()) {
                  throw Error(ErrorCode::kValidation, "body needs a string 'text'");
                }
                std::optional<double> conf;
                if (body.contains("confidence") && !body["confidence"].is_null()) {
                  if (!body["confidence"].is_number()) {
                    throw Error(ErrorCode::kValidation, "'confidence' must be a number");
                  }
                  conf = body["confidence"].get<double>();
                  if (!(*conf >= 0 && *conf <= 1)) {
                    throw Error(ErrorCode::kValidation, "'confidence' must lie in [0, 1]");
                  }
                }
                TurnRecord r =
                    m.PostTurn(req.matches[1].str(), body["text"].get<std::string>(), conf);
                Reply(res, 200,
                      {{"turn", r.turn},
                       {"system_text", r.system_text},
                       {"system_act", SystemActToJson(r.system_act)},
                       {"acts", ActsToJson(r.acts)},
                       {"delta", r.delta}});
              }));

  server.Get(R"(/sessions/([^/]+)/state)",
             Guard([&m](const httplib::Request& req, httplib::Response& res) {
               Reply(res, 200, m.GetState(req.matches[1].str()));
             }));

  server.Delete(R"(/sessions/([^/]+))",
                Guard([&m](const httplib::Request& req, httplib::Response& res) {
                  m.DeleteSession(req.matches[1].str());
                  res.status = 204;
                }));
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::Bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool HttpServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }

void HttpServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace facetalk
