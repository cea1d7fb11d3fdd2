#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mog/model_gateway.hpp"

namespace mog {

// A scripted response applies when the request's template matches and every
// variable listed in `match` has exactly the given value. Variables not listed
// are ignored, so a rule with an empty match acts as a per-template catch-all.
struct MockRule {
  TemplateId template_id;
  std::map<std::string, std::string> match;
  std::string response;
};

// Script file (JSON):
//   {
//     "strict": false,
//     "defaults": {"citation_finder": "[0]"},
//     "responses": [
//       {"template": "extract", "match": {"topic": "X"}, "response": ["fact A", "fact B"]}
//     ]
//   }
// A non-string "response" is stored as its compact JSON dump.
class MockScript {
 public:
  static MockScript load(const std::filesystem::path& path);
  static MockScript from_json(const nlohmann::json& json);

  void add(TemplateId id, std::map<std::string, std::string> match, std::string response);
  void set_default(TemplateId id, std::string response);

  // First matching rule in insertion order, then the template default.
  std::optional<std::string> lookup(const ChatRequest& request) const;

  bool strict = false;

 private:
  std::vector<MockRule> rules_;
  std::map<TemplateId, std::string> defaults_;
};

// Deterministic stand-in for a chat model. Scripted responses win; otherwise
// the built-in rule-based responder for the template answers (unless strict,
// in which case Error(kMockScriptMiss) is thrown).
class MockChatBackend final : public ChatBackend {
 public:
  explicit MockChatBackend(MockScript script = {});

  std::string complete(const ChatRequest& request, std::string_view prompt,
                       std::string_view model) override;

  std::size_t calls() const noexcept { return calls_.load(); }
  std::size_t calls(TemplateId id) const;

 private:
  MockScript script_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mu_;
  std::map<TemplateId, std::size_t> per_template_;
};

// The built-in responder used for unscripted mock requests. Each template gets
// a small, documented heuristic (see README) so the whole pipeline runs
// offline and deterministically.
std::string default_mock_response(const ChatRequest& request);

// Token-hash embeddings: every content token of the text adds 1 to bucket
// fnv1a64(token, seed) % dimension, then the vector is L2-normalized. Equal
// texts embed equally; texts sharing tokens have positive cosine.
class HashEmbedBackend final : public EmbedBackend {
 public:
  explicit HashEmbedBackend(std::size_t dimension = 256, std::uint64_t seed = 0);

  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return dimension_; }

  Embedding embed_text(std::string_view text) const;
  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

}  // namespace mog
