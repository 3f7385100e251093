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

#ifndef FACETALK_SESSION_H_
#define FACETALK_SESSION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "facetalk/acts.h"
#include "facetalk/dialogue.h"
#include "facetalk/kb.h"

namespace facetalk {

// Everything a conversation over one KB needs; shared read-only.
struct Domain {
  std::shared_ptr<const KnowledgeBase> kb;
  PolicyConfig config;
  std::shared_ptr<const TemplateSet> templates;
};

// Policy used when a KB arrives without one: its mandatory slots.
PolicyConfig DefaultPolicy(const KnowledgeBase& kb);
// Domain-neutral templates covering every act type.
const TemplateSet& DefaultTemplates();

Domain MakeDomain(KnowledgeBase kb, std::optional<PolicyConfig> config = {},
                  std::shared_ptr<const TemplateSet> templates = nullptr);

struct TurnRecord {
  int turn = 0;
  std::string user_text;
  double confidence = 1.0;
  std::vector<DialogueAct> acts;
  SystemAct system_act;
  std::string system_text;
  nlohmann::json delta;
  int64_t at_ms = 0;
};

nlohmann::json TurnRecordJson(const TurnRecord& r, bool with_time = false);

// One dialogue over a domain. Not thread-safe; Session serializes access.
class Conversation {
 public:
  explicit Conversation(Domain domain, int64_t now_ms = 0);

  // Runs understand -> track -> query -> decide -> generate.
  const TurnRecord& Post(std::string_view text, double confidence,
                         int64_t now_ms = 0);

  const DialogueState& state() const { return state_; }
  const std::vector<TurnRecord>& log() const { return log_; }
  const Domain& domain() const { return domain_; }
  bool closed() const { return closed_; }

  // Belief, store, buckets, first-bucket cards, facets and history.
  nlohmann::json StateDocument() const;

 private:
  Domain domain_;
  DialogueState state_;
  std::vector<TurnRecord> log_;
  bool closed_ = false;
};

class SessionManager {
 public:
  struct Options {
    // Empty: in-memory only.
    std::string data_dir;
    std::function<int64_t()> clock;
    std::function<std::string()> id_source;
  };

  SessionManager();
  explicit SessionManager(Options options);

  // Returns the KB id. Re-registering identical content is a no-op; a
  // different KB under a taken id is a conflict.
  std::string AddDomain(Domain domain);
  std::shared_ptr<const Domain> FindDomain(std::string_view kb_id) const;

  struct Created {
    std::string session_id;
    std::string greeting;
  };
  Created CreateSession(std::string_view kb_id);

  // Throws kNotFound, kValidation (empty text), kConflict (a turn on the
  // same session is in flight, or the session is closed).
  TurnRecord PostTurn(std::string_view session_id, std::string_view text,
                      std::optional<double> confidence = std::nullopt);

  nlohmann::json GetState(std::string_view session_id) const;
  void DeleteSession(std::string_view session_id);
  std::vector<std::string> SessionIds() const;

  // Re-reads KBs and session logs from the data directory, replaying every
  // user turn. Returns the number of sessions restored.
  size_t Load();

 private:
  struct Session {
    std::string id;
    std::string kb_id;
    int64_t created_ms = 0;
    int64_t updated_ms = 0;
    std::mutex turn_mutex;
    std::unique_ptr<Conversation> conversation;
  };

  std::shared_ptr<Session> Find(std::string_view id) const;
  nlohmann::json Document(const Session& s) const;
  void Append(const Session& s, const nlohmann::json& event) const;
  std::string NewId();
  int64_t Now() const;

  Options options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Domain>, std::less<>> domains_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  uint64_t counter_ = 0;
};

struct ScriptLine {
  enum class Kind { kUser, kExpect } kind = Kind::kUser;
  int line = 0;
  std::string text;
  double confidence = 1.0;
};

// `U<TAB>text<TAB>confidence` and `S<TAB>expected-act-type` lines; blank lines
// and '#' comments are skipped.
std::vector<ScriptLine> ParseScript(std::string_view text);

struct ScriptResult {
  nlohmann::json transcript;
  bool success = false;
  std::vector<std::string> failures;
};

ScriptResult RunScript(const Domain& domain, std::span<const ScriptLine> script);

}  // namespace facetalk

#endif  // FACETALK_SESSION_H_
