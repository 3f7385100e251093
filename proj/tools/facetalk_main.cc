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

// Command-line entry point: serve, run, query.

#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "facetalk/error.h"
#include "facetalk/http_api.h"
#include "facetalk/preference.h"
#include "facetalk/session.h"

namespace {

facetalk::HttpServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server) g_server->Stop();
}

facetalk::Domain LoadDomain(const std::string& kb_path, const std::string& policy_path,
                            const std::string& templates_path) {
  auto kb = facetalk::LoadKnowledgeBaseFile(kb_path);
  std::optional<facetalk::PolicyConfig> config;
  if (!policy_path.empty()) config = facetalk::LoadPolicyConfig(policy_path);
  std::shared_ptr<const facetalk::TemplateSet> templates;
  if (!templates_path.empty()) {
    templates = std::make_shared<const facetalk::TemplateSet>(
        facetalk::TemplateSet::Load(templates_path));
  }
  return facetalk::MakeDomain(std::move(kb), config, templates);
}

int Serve(const std::string& kb, const std::string& policy, const std::string& templates,
          const std::string& host, int port, const std::string& data_dir) {
  facetalk::SessionManager::Options options;
  options.data_dir = data_dir;
  facetalk::SessionManager manager(options);
  std::string kb_id = manager.AddDomain(LoadDomain(kb, policy, templates));
  size_t restored = manager.Load();
  facetalk::HttpServer server(manager);
  if (!server.Bind(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cerr << "serving kb '" << kb_id << "' on " << host << ":" << port << " ("
            << restored << " sessions restored)\n";
  server.ListenAfterBind();
  g_server = nullptr;
  return 0;
}

int Run(const std::string& kb, const std::string& policy, const std::string& templates,
        const std::string& script_path, const std::string& out_path) {
  auto domain = LoadDomain(kb, policy, templates);
  auto script = facetalk::ParseScript(facetalk::ReadFile(script_path));
  auto result = facetalk::RunScript(domain, script);
  const std::string text = result.transcript.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw facetalk::Error(facetalk::ErrorCode::kIo, "cannot write " + out_path);
    out << text;
  }
  for (const auto& f : result.failures) std::cerr << "assertion failed: " << f << "\n";
  std::cerr << "success: " << (result.success ? "true" : "false") << "\n";
  return result.failures.empty() ? 0 : 1;
}

int Query(const std::string& kb_path, const std::string& constraints,
          const std::string& preferences, bool serial) {
  auto kb = facetalk::LoadKnowledgeBaseFile(kb_path);
  auto cs = facetalk::ParseConstraintList(constraints, kb);
  auto ps = facetalk::ParsePreferenceList(preferences, kb);
  auto mode = serial ? facetalk::Execution::kSerial : facetalk::Execution::kParallel;
  auto rs = facetalk::Filter(kb, cs, mode);
  auto bo = facetalk::ComputeBucketOrder(rs, ps, kb, mode);
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : bo.buckets) buckets.push_back(b);
  nlohmann::json items = nlohmann::json::object();
  for (const auto& id : bo.ids) {
    items[id] = {{"score", bo.metrics.score.at(id)}, {"wins", bo.metrics.wins.at(id)}};
  }
  nlohmann::json out = {{"kb_id", kb.id()},
                        {"count", rs.ids.size()},
                        {"bucket_count", bo.buckets.size()},
                        {"buckets", buckets},
                        {"metrics", items},
                        {"discriminating_slots", facetalk::DiscriminatingSlots(bo, kb, ps)},
                        {"facets", facetalk::FacetCountsJson(rs.facets)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faceted conversational search over a knowledge base"};
  app.require_subcommand(1);

  std::string kb, policy, templates, host = "127.0.0.1", data_dir, script, out;
  std::string constraints, preferences;
  int port = 8080;
  bool serial = false;

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--kb", kb, "Knowledge base JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--policy", policy, "Policy config JSON")->check(CLI::ExistingFile);
  serve->add_option("--templates", templates, "Template file")->check(CLI::ExistingFile);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--data-dir", data_dir, "Directory for KBs and session logs");

  auto* run = app.add_subcommand("run", "Execute a dialogue script");
  run->add_option("--kb", kb, "Knowledge base JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--script", script, "Script file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Transcript output (default stdout)");
  run->add_option("--policy", policy, "Policy config JSON")->check(CLI::ExistingFile);
  run->add_option("--templates", templates, "Template file")->check(CLI::ExistingFile);

  auto* query = app.add_subcommand("query", "Filter and rank once");
  query->add_option("--kb", kb, "Knowledge base JSON")->required()->check(CLI::ExistingFile);
  query->add_option("--constraints", constraints, "Constraints, ';'-separated");
  query->add_option("--preferences", preferences, "Preferences, ';'-separated");
  query->add_flag("--serial", serial, "Use the serial kernels");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve) return Serve(kb, policy, templates, host, port, data_dir);
    if (*run) return Run(kb, policy, templates, script, out);
    if (*query) return Query(kb, constraints, preferences, serial);
  } catch (const facetalk::ValidationError& e) {
    std::cerr << "error (" << facetalk::ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    for (const auto& f : e.findings()) std::cerr << "  " << f << "\n";
    return 2;
  } catch (const facetalk::Error& e) {
    std::cerr << "error (" << facetalk::ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return 2;
  }
  return 0;
}
