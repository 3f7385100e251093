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

#ifndef FACETALK_HTTP_API_H_
#define FACETALK_HTTP_API_H_

#include <memory>
#include <string>

#include "facetalk/error.h"
#include "facetalk/session.h"

namespace facetalk {

// 400 for malformed or invalid input, 404 unknown ids, 409 conflicts.
int HttpStatusFor(ErrorCode code);

// JSON API over a SessionManager:
//   POST   /kbs                       KB document -> {kb_id}
//   GET    /kbs/{id}/facets           ?constraints=<expr;expr> -> counts
//   POST   /sessions                  {kb_id} -> {session_id, greeting}
//   POST   /sessions/{id}/turns       {text, confidence?} -> turn result
//   GET    /sessions/{id}/state       -> state document
//   DELETE /sessions/{id}             -> 204
class HttpServer {
 public:
  explicit HttpServer(SessionManager& manager);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port, or -1.
  int BindToAnyPort(const std::string& host = "127.0.0.1");
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void WaitUntilReady() const;
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace facetalk

#endif  // FACETALK_HTTP_API_H_
