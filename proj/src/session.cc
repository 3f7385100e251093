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

#include "facetalk/session.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "facetalk/error.h"
#include "facetalk/understanding.h"

namespace facetalk {
namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultTemplates = R"(greet: Hello, welcome to {system_name}. How may I help you?
request: What {slot} are you looking for?
ask_importance: Which of the following criteria are important for you? {slots}?
inform_count: {count} {nouns} match your request.
inform_count.none: No {nouns} match your request.
inform_count.hint: You could relax the {slot} constraint.
confirm: Did you mean {constraint}?
goodbye: Thank you for using {system_name}. Goodbye.
compare.lead: {count} {noun} match your preferences.
compare.lead.one: {count} {noun} matches your preferences.
compare.group.all: All are located in {group}.
compare.group.head: {Count} {be} located in {group}
compare.group.tail: {count} in {group}
compare.item: {name} in {group} has {aspects}.
compare.item.nogroup: {name} has {aspects}.
compare.item.plain: {name} is in {group}.
compare.item.plain.nogroup: {name} is also a match.
compare.aspect.min: the lowest {slot} ({value})
compare.aspect.max: the highest {slot} ({value})
compare.aspect.mid: {slot} of {value}
compare.aspect.none: {slot} {value}
)";

nlohmann::json AssignmentJson(const Assignment& a) {
  if (const auto* d = std::get_if<double>(&a)) {
    if (*d == std::floor(*d) && std::fabs(*d) < 9e15) {
      return static_cast<int64_t>(*d);
    }
    return *d;
  }
  if (const auto* s = std::get_if<std::string>(&a)) return *s;
  return std::get<std::vector<std::string>>(a);
}

nlohmann::json ItemCard(const Item& item, const KnowledgeBase& kb) {
  nlohmann::json slots = nlohmann::json::object();
  for (const auto& slot : kb.slots()) {
    if (const Assignment* a = item.Find(slot.name)) slots[slot.name] = AssignmentJson(*a);
  }
  return {{"id", item.id}, {"name", item.name}, {"slots", slots}};
}

bool Blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

bool SafeId(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      return false;
    }
  }
  return id != "." && id != "..";
}

}  // namespace

PolicyConfig DefaultPolicy(const KnowledgeBase& kb) {
  PolicyConfig config;
  for (const auto& slot : kb.slots()) {
    if (slot.mandatory) config.mandatory_slots.push_back(slot.name);
  }
  return config;
}

const TemplateSet& DefaultTemplates() {
  static const TemplateSet kSet = TemplateSet::Parse(kDefaultTemplates);
  return kSet;
}

Domain MakeDomain(KnowledgeBase kb, std::optional<PolicyConfig> config,
                  std::shared_ptr<const TemplateSet> templates) {
  Domain d;
  d.config = config ? *config : DefaultPolicy(kb);
  ValidatePolicyConfig(d.config, kb);
  d.kb = std::make_shared<const KnowledgeBase>(std::move(kb));
  d.templates = templates ? std::move(templates)
                          : std::shared_ptr<const TemplateSet>(
                                std::shared_ptr<const TemplateSet>{}, &DefaultTemplates());
  return d;
}

nlohmann::json TurnRecordJson(const TurnRecord& r, bool with_time) {
  nlohmann::json js = {{"turn", r.turn},
                       {"user_text", r.user_text},
                       {"confidence", r.confidence},
                       {"acts", ActsToJson(r.acts)},
                       {"system_act", SystemActToJson(r.system_act)},
                       {"system_text", r.system_text}};
  if (!r.delta.is_null()) js["delta"] = r.delta;
  if (with_time) js["at_ms"] = r.at_ms;
  return js;
}

Conversation::Conversation(Domain domain, int64_t now_ms)
    : domain_(std::move(domain)), state_(InitialState(*domain_.kb)) {
  TurnRecord greeting;
  greeting.system_act = SelectAction(state_, *domain_.kb, domain_.config);
  greeting.system_text = GenerateText(
      greeting.system_act, {*domain_.kb, domain_.config, *domain_.templates});
  greeting.at_ms = now_ms;
  state_.last_system_act = greeting.system_act;
  log_.push_back(std::move(greeting));
}

const TurnRecord& Conversation::Post(std::string_view text, double confidence,
                                     int64_t now_ms) {
  if (Blank(text)) throw Error(ErrorCode::kValidation, "turn text must not be empty");
  if (closed_) throw Error(ErrorCode::kConflict, "session is closed");
  const KnowledgeBase& kb = *domain_.kb;
  const SystemAct* last = state_.last_system_act ? &*state_.last_system_act : nullptr;

  // Work on a copy so a failure leaves the dialogue untouched.
  DialogueState next = state_;
  TurnRecord record;
  record.user_text = std::string(text);
  record.confidence = confidence;
  record.acts = ParseUtterance(text, kb, confidence, last);
  StateDelta delta = ApplyUserActs(next, record.acts, kb, domain_.config);
  record.turn = next.turn;
  record.system_act = SelectAction(next, kb, domain_.config);
  record.system_text =
      GenerateText(record.system_act, {kb, domain_.config, *domain_.templates});
  record.delta = StateDeltaJson(delta, next);
  record.at_ms = now_ms;
  next.last_system_act = record.system_act;

  state_ = std::move(next);
  closed_ = record.system_act.type == SystemActType::kGoodbye;
  log_.push_back(std::move(record));
  return log_.back();
}

nlohmann::json Conversation::StateDocument() const {
  const KnowledgeBase& kb = *domain_.kb;
  auto render_cs = [](const std::vector<StoredConstraint>& cs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : cs) out.push_back(RenderConstraint(s.constraint));
    return out;
  };
  nlohmann::json prefs = nlohmann::json::array();
  for (const auto& p : state_.preferences) prefs.push_back(RenderPreference(p));
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& b : state_.buckets.buckets) sizes.push_back(b.size());
  nlohmann::json cards = nlohmann::json::array();
  if (!state_.buckets.buckets.empty()) {
    for (const auto& id : state_.buckets.buckets.front()) {
      nlohmann::json card = ItemCard(kb.item(id), kb);
      card["score"] = RoundTo9(state_.buckets.metrics.score.at(id));
      card["wins"] = state_.buckets.metrics.wins.at(id);
      cards.push_back(std::move(card));
    }
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : log_) history.push_back(TurnRecordJson(r));
  return {{"kb_id", kb.id()},
          {"turn", state_.turn},
          {"closed", closed_},
          {"belief", BeliefJson(state_.belief)},
          {"constraints", render_cs(state_.constraints)},
          {"pending", render_cs(state_.pending)},
          {"preferences", prefs},
          {"result_count", state_.result.ids.size()},
          {"bucket_sizes", sizes},
          {"first_bucket", cards},
          {"facets", FacetCountsJson(state_.result.facets)},
          {"last_system_act", state_.last_system_act
                                  ? SystemActToJson(*state_.last_system_act)
                                  : nlohmann::json()},
          {"history", history}};
}

SessionManager::SessionManager() : SessionManager(Options{}) {}

SessionManager::SessionManager(Options options) : options_(std::move(options)) {
  if (!options_.data_dir.empty()) {
    std::error_code ec;
    fs::create_directories(fs::path(options_.data_dir) / "kbs", ec);
    fs::create_directories(fs::path(options_.data_dir) / "sessions", ec);
    if (ec) {
      throw Error(ErrorCode::kIo, "cannot create data directory " + options_.data_dir +
                                      ": " + ec.message());
    }
  }
}

int64_t SessionManager::Now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string SessionManager::NewId() {
  if (options_.id_source) return options_.id_source();
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << "s" << std::hex << rng() << "-" << ++counter_;
  return out.str();
}

std::string SessionManager::AddDomain(Domain domain) {
  const std::string id = domain.kb->id();
  if (!SafeId(id)) {
    throw Error(ErrorCode::kValidation, "kb id '" + id + "' must be [A-Za-z0-9._-]+");
  }
  std::unique_lock lock(mutex_);
  if (auto it = domains_.find(id); it != domains_.end()) {
    if (it->second->kb->ToCanonicalJson() == domain.kb->ToCanonicalJson()) return id;
    throw Error(ErrorCode::kConflict, "a different kb is registered as '" + id + "'");
  }
  if (!options_.data_dir.empty()) {
    fs::path dir = fs::path(options_.data_dir) / "kbs";
    WriteFile(dir / (id + ".json"), domain.kb->ToCanonicalJson().dump(2) + "\n");
    WriteFile(dir / (id + ".policy.json"),
              PolicyConfigToJson(domain.config).dump(2) + "\n");
    WriteFile(dir / (id + ".templates.txt"), domain.templates->ToText());
  }
  domains_.emplace(id, std::make_shared<const Domain>(std::move(domain)));
  return id;
}

std::shared_ptr<const Domain> SessionManager::FindDomain(std::string_view kb_id) const {
  std::shared_lock lock(mutex_);
  auto it = domains_.find(kb_id);
  return it == domains_.end() ? nullptr : it->second;
}

std::shared_ptr<SessionManager::Session> SessionManager::Find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + std::string(id) + "'");
  }
  return it->second;
}

void SessionManager::Append(const Session& s, const nlohmann::json& event) const {
  if (options_.data_dir.empty()) return;
  fs::path path = fs::path(options_.data_dir) / "sessions" / (s.id + ".ndjson");
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + path.string());
  out << event.dump() << "\n";
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

SessionManager::Created SessionManager::CreateSession(std::string_view kb_id) {
  auto domain = FindDomain(kb_id);
  if (!domain) throw Error(ErrorCode::kNotFound, "unknown kb '" + std::string(kb_id) + "'");
  auto session = std::make_shared<Session>();
  session->kb_id = std::string(kb_id);
  session->created_ms = session->updated_ms = Now();
  session->conversation = std::make_unique<Conversation>(*domain, session->created_ms);
  {
    std::unique_lock lock(mutex_);
    do {
      session->id = NewId();
    } while (sessions_.count(session->id));
    if (!SafeId(session->id)) {
      throw Error(ErrorCode::kInvalidArgument, "generated session id is not path safe");
    }
    sessions_.emplace(session->id, session);
  }
  Append(*session, {{"event", "create"},
                    {"session_id", session->id},
                    {"kb_id", session->kb_id},
                    {"at_ms", session->created_ms}});
  return {session->id, session->conversation->log().front().system_text};
}

TurnRecord SessionManager::PostTurn(std::string_view session_id, std::string_view text,
                                    std::optional<double> confidence) {
  auto session = Find(session_id);
  std::unique_lock turn(session->turn_mutex, std::try_to_lock);
  if (!turn.owns_lock()) {
    throw Error(ErrorCode::kConflict,
                "a turn is already in progress on session '" + session->id + "'");
  }
  if (!session->conversation) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + session->id + "'");
  }
  const int64_t now = Now();
  TurnRecord record = session->conversation->Post(text, confidence.value_or(1.0), now);
  session->updated_ms = now;
  Append(*session, {{"event", "turn"},
                    {"turn", record.turn},
                    {"text", record.user_text},
                    {"confidence", record.confidence},
                    {"system_text", record.system_text},
                    {"at_ms", now}});
  return record;
}

nlohmann::json SessionManager::Document(const Session& s) const {
  nlohmann::json doc = s.conversation->StateDocument();
  doc["session_id"] = s.id;
  doc["created_at_ms"] = s.created_ms;
  doc["updated_at_ms"] = s.updated_ms;
  return doc;
}

nlohmann::json SessionManager::GetState(std::string_view session_id) const {
  auto session = Find(session_id);
  std::unique_lock turn(session->turn_mutex);
  if (!session->conversation) {
    throw Error(ErrorCode::kNotFound, "unknown session '" + session->id + "'");
  }
  return Document(*session);
}

void SessionManager::DeleteSession(std::string_view session_id) {
  std::shared_ptr<Session> session;
  {
    std::unique_lock lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
      throw Error(ErrorCode::kNotFound, "unknown session '" + std::string(session_id) + "'");
    }
    session = it->second;
    sessions_.erase(it);
  }
  // Wait for an in-flight turn, then retire the dialogue.
  std::unique_lock turn(session->turn_mutex);
  session->conversation.reset();
  if (!options_.data_dir.empty()) {
    std::error_code ec;
    fs::remove(fs::path(options_.data_dir) / "sessions" / (session->id + ".ndjson"), ec);
  }
}

std::vector<std::string> SessionManager::SessionIds() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

size_t SessionManager::Load() {
  if (options_.data_dir.empty()) return 0;
  const fs::path root(options_.data_dir);
  std::vector<fs::path> kb_files;
  for (const auto& entry : fs::directory_iterator(root / "kbs")) {
    const std::string name = entry.path().filename().string();
    if (name.ends_with(".json") && !name.ends_with(".policy.json")) {
      kb_files.push_back(entry.path());
    }
  }
  std::sort(kb_files.begin(), kb_files.end());
  for (const auto& path : kb_files) {
    KnowledgeBase kb = LoadKnowledgeBaseFile(path.string());
    if (FindDomain(kb.id())) continue;
    fs::path policy = path;
    policy.replace_extension(".policy.json");
    std::optional<PolicyConfig> config;
    if (fs::exists(policy)) config = LoadPolicyConfig(policy.string());
    fs::path templates = path;
    templates.replace_extension(".templates.txt");
    std::shared_ptr<const TemplateSet> set;
    if (fs::exists(templates)) {
      set = std::make_shared<const TemplateSet>(TemplateSet::Load(templates.string()));
    }
    Domain d = MakeDomain(std::move(kb), config, set);
    const std::string id = d.kb->id();
    std::unique_lock lock(mutex_);
    domains_.emplace(id, std::make_shared<const Domain>(std::move(d)));
  }

  std::vector<fs::path> logs;
  for (const auto& entry : fs::directory_iterator(root / "sessions")) {
    if (entry.path().extension() == ".ndjson") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  size_t restored = 0;
  for (const auto& path : logs) {
    std::ifstream in(path);
    std::string line;
    std::shared_ptr<Session> session;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (Blank(line)) continue;
      const std::string where = path.filename().string() + ":" + std::to_string(number);
      nlohmann::json event;
      try {
        event = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kParse, where + ": " + e.what());
      }
      const std::string kind = event.value("event", "");
      if (kind == "create") {
        auto domain = FindDomain(event.at("kb_id").get<std::string>());
        if (!domain) throw Error(ErrorCode::kNotFound, where + ": unknown kb");
        session = std::make_shared<Session>();
        session->id = event.at("session_id").get<std::string>();
        session->kb_id = event.at("kb_id").get<std::string>();
        session->created_ms = session->updated_ms = event.at("at_ms").get<int64_t>();
        session->conversation =
            std::make_unique<Conversation>(*domain, session->created_ms);
      } else if (kind == "turn") {
        if (!session) throw Error(ErrorCode::kParse, where + ": turn before create");
        const int64_t at = event.at("at_ms").get<int64_t>();
        const auto& r = session->conversation->Post(
            event.at("text").get<std::string>(), event.at("confidence").get<double>(), at);
        if (r.system_text != event.at("system_text").get<std::string>() ||
            r.turn != event.at("turn").get<int>()) {
          throw Error(ErrorCode::kIo, where + ": replay diverged from the stored turn");
        }
        session->updated_ms = at;
      } else {
        throw Error(ErrorCode::kParse, where + ": unknown event '" + kind + "'");
      }
    }
    if (session) {
      std::unique_lock lock(mutex_);
      sessions_[session->id] = session;
      ++restored;
    }
  }
  return restored;
}

std::vector<ScriptLine> ParseScript(std::string_view text) {
  std::vector<ScriptLine> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Blank(line) || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    const std::string where = "script line " + std::to_string(number);
    ScriptLine s;
    s.line = number;
    if (fields[0] == "U") {
      if (fields.size() < 2 || fields.size() > 3 || Blank(fields[1])) {
        throw Error(ErrorCode::kParse, where + ": expected U<TAB>text[<TAB>confidence]");
      }
      s.kind = ScriptLine::Kind::kUser;
      s.text = fields[1];
      if (fields.size() == 3) {
        try {
          size_t used = 0;
          s.confidence = std::stod(fields[2], &used);
          if (used != fields[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw Error(ErrorCode::kParse, where + ": bad confidence '" + fields[2] + "'");
        }
        if (!(s.confidence >= 0 && s.confidence <= 1)) {
          throw Error(ErrorCode::kParse, where + ": confidence outside [0, 1]");
        }
      }
    } else if (fields[0] == "S") {
      if (fields.size() != 2 || !ParseSystemActType(fields[1])) {
        throw Error(ErrorCode::kParse, where + ": expected S<TAB>system-act-type");
      }
      s.kind = ScriptLine::Kind::kExpect;
      s.text = fields[1];
    } else {
      throw Error(ErrorCode::kParse, where + ": lines start with U or S");
    }
    out.push_back(std::move(s));
  }
  return out;
}

ScriptResult RunScript(const Domain& domain, std::span<const ScriptLine> script) {
  ScriptResult result;
  Conversation conversation(domain);
  nlohmann::json turns = nlohmann::json::array();
  nlohmann::json checks = nlohmann::json::array();
  int user_turns = 0;
  bool compared = false;
  std::vector<std::string> compared_items;
  for (const auto& line : script) {
    const TurnRecord& last = conversation.log().back();
    if (line.kind == ScriptLine::Kind::kExpect) {
      const std::string actual = SystemActTypeName(last.system_act.type);
      const bool ok = actual == line.text;
      checks.push_back({{"line", line.line},
                        {"turn", last.turn},
                        {"expected", line.text},
                        {"actual", actual},
                        {"ok", ok}});
      if (!ok) {
        result.failures.push_back("line " + std::to_string(line.line) + ", turn " +
                                  std::to_string(last.turn) + ": expected " +
                                  line.text + ", got " + actual);
      }
      continue;
    }
    if (conversation.closed()) {
      result.failures.push_back("line " + std::to_string(line.line) +
                                ": user turn after the session closed");
      continue;
    }
    const TurnRecord& r = conversation.Post(line.text, line.confidence);
    ++user_turns;
    turns.push_back(TurnRecordJson(r));
    if (r.system_act.type == SystemActType::kInformCompare) {
      compared = true;
      compared_items = r.system_act.items;
    }
  }
  result.success = user_turns > 0 && compared;
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& b : conversation.state().buckets.buckets) sizes.push_back(b.size());
  result.transcript = {
      {"kb_id", domain.kb->id()},
      {"greeting", conversation.log().front().system_text},
      {"turns", turns},
      {"checks", checks},
      {"metrics",
       {{"user_turns", user_turns},
        {"success", result.success},
        {"compare_items", compared_items},
        {"final_result_count", conversation.state().result.ids.size()},
        {"final_bucket_sizes", sizes},
        {"closed", conversation.closed()}}}};
  return result;
}

}  // namespace facetalk
