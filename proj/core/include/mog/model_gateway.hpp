#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "mog/embedding.hpp"
#include "mog/prompts.hpp"

namespace mog {

struct ChatRequest {
  TemplateId template_id = TemplateId::kExtract;
  std::map<std::string, std::string> variables;
  double temperature = 0.0;
  double top_p = 1.0;
};

enum class BackendKind { kHttp, kMock };

struct BackendConfig {
  BackendKind kind = BackendKind::kMock;
  std::string endpoint;
  std::string model_name;
  int max_concurrency = 4;
  std::chrono::milliseconds timeout{60'000};
  int retries = 2;
  std::chrono::milliseconds backoff{250};  // first retry delay, doubled per attempt
  std::uint64_t seed = 0;
  std::string api_key_env = "MOG_API_KEY";

  // mock chat
  std::filesystem::path mock_script;
  bool strict = false;

  // embeddings
  std::size_t dimension = 256;

  // Throws Error(kInvalidConfig).
  void validate() const;
};

// Per-template model choice. Planning and writing templates go to the strong
// model, everything else to the fast one, unless overridden.
struct ModelRouting {
  std::string strong_model = "gpt-4o-2024-08-06";
  std::string fast_model = "gpt-4o-mini-2024-07-18";
  std::map<TemplateId, std::string> overrides;

  std::string model_for(TemplateId id) const;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const ChatRequest& request, std::string_view prompt,
                               std::string_view model) = 0;
};

class EmbedBackend {
 public:
  virtual ~EmbedBackend() = default;
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
  virtual std::size_t dimension() const = 0;
};

// Single entry point for every model call in the pipeline. Thread-safe; at
// most max_concurrency chat/embed calls are in flight at once.
class ModelGateway {
 public:
  ModelGateway(std::shared_ptr<ChatBackend> chat, std::shared_ptr<EmbedBackend> embed,
               ModelRouting routing = {}, int max_concurrency = 4);

  std::string chat(const ChatRequest& request) const;
  std::vector<Embedding> embed(const std::vector<std::string>& texts) const;
  Embedding embed_one(std::string_view text) const;

  std::size_t dimension() const { return embed_->dimension(); }
  const ModelRouting& routing() const noexcept { return routing_; }

 private:
  std::shared_ptr<ChatBackend> chat_;
  std::shared_ptr<EmbedBackend> embed_;
  ModelRouting routing_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

std::shared_ptr<ChatBackend> make_chat_backend(const BackendConfig& config);
std::shared_ptr<EmbedBackend> make_embed_backend(const BackendConfig& config);

}  // namespace mog
