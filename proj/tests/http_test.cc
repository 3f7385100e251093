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

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

#include "facetalk/session.h"
#include "test_util.h"

namespace facetalk {
namespace {

using nlohmann::json;

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manager_.AddDomain(testing::HotelsDomain());
    server_ = std::make_unique<HttpServer>(manager_);
    port_ = server_->BindToAnyPort();
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->ListenAfterBind(); });
    server_->WaitUntilReady();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->Stop();
    thread_.join();
  }

  httplib::Result PostJson(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }
  std::string NewSession() {
    auto res = PostJson("/sessions", {{"kb_id", "hotels-sample"}});
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body)["session_id"].get<std::string>();
  }
  static std::string Code(const httplib::Result& res) {
    return json::parse(res->body)["error"]["code"].get<std::string>();
  }

  SessionManager manager_;
  std::unique_ptr<HttpServer> server_;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = -1;
};

TEST_F(HttpTest, HotelFlowOverHttp) {
  auto created = PostJson("/sessions", {{"kb_id", "hotels-sample"}});
  ASSERT_EQ(created->status, 201);
  json body = json::parse(created->body);
  EXPECT_EQ(body["greeting"],
            "Hello, welcome to the Japanese Hotels spoken dialogue system. How may I help "
            "you?");
  const std::string id = body["session_id"];
  std::vector<std::string> acts;
  for (const auto& line : testing::FlowScript()) {
    if (line.kind != ScriptLine::Kind::kUser) continue;
    auto res = PostJson("/sessions/" + id + "/turns",
                        {{"text", line.text}, {"confidence", line.confidence}});
    ASSERT_EQ(res->status, 200) << res->body;
    json turn = json::parse(res->body);
    acts.push_back(turn["system_act"]["type"]);
    EXPECT_TRUE(turn["delta"].contains("bucket_sizes"));
  }
  EXPECT_EQ(acts, (std::vector<std::string>{"request", "request", "ask_importance",
                                            "inform_compare", "goodbye"}));
  auto state = client_->Get("/sessions/" + id + "/state");
  ASSERT_EQ(state->status, 200);
  json doc = json::parse(state->body);
  EXPECT_EQ(doc["turn"], 5);
  EXPECT_EQ(doc["closed"], true);
  EXPECT_EQ(doc["history"].size(), 6u);
}

TEST_F(HttpTest, KbUploadAndFacets) {
  auto kb = testing::SmallLocations().ToCanonicalJson();
  auto res = client_->Post("/kbs", kb.dump(), "application/json");
  ASSERT_EQ(res->status, 201) << res->body;
  EXPECT_EQ(json::parse(res->body)["kb_id"], "small");
  EXPECT_EQ(client_->Post("/kbs", kb.dump(), "application/json")->status, 201);

  auto facets = client_->Get("/kbs/small/facets?constraints=location%20%3D%20kyoto");
  ASSERT_EQ(facets->status, 200) << facets->body;
  json f = json::parse(facets->body);
  EXPECT_EQ(f["count"], 4);
  EXPECT_EQ(f["ids"], json::array({"a", "b", "c", "e"}));
  EXPECT_EQ(f["facets"]["location"]["minami"], 2);

  auto all = client_->Get("/kbs/small/facets");
  EXPECT_EQ(json::parse(all->body)["count"], 5);
  auto session = PostJson("/sessions", {{"kb_id", "small"}});
  EXPECT_EQ(session->status, 201);
}

TEST_F(HttpTest, ErrorStatuses) {
  EXPECT_EQ(client_->Post("/kbs", "{not json", "application/json")->status, 400);
  auto invalid = client_->Post("/kbs", R"({"id": "x", "slots": [], "items": [{"id": 3}]})",
                               "application/json");
  EXPECT_EQ(invalid->status, 400);

  auto bad_expr = client_->Get("/kbs/hotels-sample/facets?constraints=stars%20%3E%20%3E");
  EXPECT_EQ(bad_expr->status, 400);
  EXPECT_EQ(Code(bad_expr), "parse_error");
  EXPECT_EQ(client_->Get("/kbs/nope/facets")->status, 404);

  EXPECT_EQ(PostJson("/sessions", {{"kb_id", "nope"}})->status, 404);
  EXPECT_EQ(PostJson("/sessions", {{"kb", 1}})->status, 400);
  EXPECT_EQ(client_->Get("/sessions/missing/state")->status, 404);
  EXPECT_EQ(PostJson("/sessions/missing/turns", {{"text", "hi"}})->status, 404);

  const std::string id = NewSession();
  auto blank = PostJson("/sessions/" + id + "/turns", {{"text", "  "}});
  EXPECT_EQ(blank->status, 400);
  EXPECT_EQ(Code(blank), "validation_error");
  EXPECT_EQ(PostJson("/sessions/" + id + "/turns", {{"text", "hi"}, {"confidence", 2}})->status,
            400);
  EXPECT_EQ(PostJson("/sessions/" + id + "/turns", {{"text", "goodbye"}})->status, 200);
  auto closed = PostJson("/sessions/" + id + "/turns", {{"text", "hello"}});
  EXPECT_EQ(closed->status, 409);
  EXPECT_EQ(Code(closed), "conflict");

  auto other = testing::Hotels().ToCanonicalJson();
  other["items"].erase(other["items"].begin());
  EXPECT_EQ(client_->Post("/kbs", other.dump(), "application/json")->status, 409);
}

TEST_F(HttpTest, DeleteSession) {
  const std::string id = NewSession();
  EXPECT_EQ(client_->Delete("/sessions/" + id)->status, 204);
  EXPECT_EQ(client_->Get("/sessions/" + id + "/state")->status, 404);
  EXPECT_EQ(client_->Delete("/sessions/" + id)->status, 404);
}

TEST(HttpStatusFor, Mapping) {
  EXPECT_EQ(HttpStatusFor(ErrorCode::kNotFound), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kConflict), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kIo), 500);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kParse), 400);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kCycle), 400);
}

}  // namespace
}  // namespace facetalk
