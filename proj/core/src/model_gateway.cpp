#include "mog/model_gateway.hpp"

#include <utility>

#include "mog/error.hpp"
#include "mog/http_client.hpp"
#include "mog/mock_backend.hpp"

namespace mog {
namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

}  // namespace

void BackendConfig::validate() const {
  if (max_concurrency < 1) throw Error(ErrorCode::kInvalidConfig, "max_concurrency must be >= 1");
  if (retries < 0) throw Error(ErrorCode::kInvalidConfig, "retries must be >= 0");
  if (timeout.count() <= 0) throw Error(ErrorCode::kInvalidConfig, "timeout must be positive");
  if (dimension == 0) throw Error(ErrorCode::kInvalidConfig, "dimension must be positive");
  if (kind == BackendKind::kHttp) {
    if (endpoint.empty()) throw Error(ErrorCode::kInvalidConfig, "http backend requires an endpoint");
    if (model_name.empty()) throw Error(ErrorCode::kInvalidConfig, "http backend requires a model_name");
    if (!parse_url(endpoint)) throw Error(ErrorCode::kInvalidConfig, "bad endpoint URL '" + endpoint + "'");
  }
}

std::string ModelRouting::model_for(TemplateId id) const {
  if (auto it = overrides.find(id); it != overrides.end()) return it->second;
  return prompt_template(id).tier == ModelTier::kStrong ? strong_model : fast_model;
}

ModelGateway::ModelGateway(std::shared_ptr<ChatBackend> chat, std::shared_ptr<EmbedBackend> embed,
                           ModelRouting routing, int max_concurrency)
    : chat_(std::move(chat)),
      embed_(std::move(embed)),
      routing_(std::move(routing)),
      slots_(std::make_unique<std::counting_semaphore<>>(max_concurrency < 1 ? 1 : max_concurrency)) {
  if (!chat_ || !embed_) throw Error(ErrorCode::kInvalidConfig, "gateway needs chat and embed backends");
  validate_templates();
}

std::string ModelGateway::chat(const ChatRequest& request) const {
  const PromptTemplate& tpl = prompt_template(request.template_id);
  const std::string prompt = render_prompt(tpl, request.variables);
  SlotGuard slot(*slots_);
  return chat_->complete(request, prompt, routing_.model_for(request.template_id));
}

std::vector<Embedding> ModelGateway::embed(const std::vector<std::string>& texts) const {
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "embed() called with no texts");
  std::vector<Embedding> out;
  {
    SlotGuard slot(*slots_);
    out = embed_->embed(texts);
  }
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding backend returned " +
                                                   std::to_string(out.size()) + " vectors for " +
                                                   std::to_string(texts.size()) + " inputs");
  }
  for (const auto& v : out) {
    if (v.size() != embed_->dimension()) {
      throw Error(ErrorCode::kDimensionMismatch, "embedding backend returned a vector of dimension " +
                                                     std::to_string(v.size()));
    }
  }
  return out;
}

Embedding ModelGateway::embed_one(std::string_view text) const {
  return embed({std::string(text)}).front();
}

std::shared_ptr<ChatBackend> make_chat_backend(const BackendConfig& config) {
  config.validate();
  if (config.kind == BackendKind::kHttp) return std::make_shared<HttpChatBackend>(config);
  MockScript script = config.mock_script.empty() ? MockScript{} : MockScript::load(config.mock_script);
  if (config.strict) script.strict = true;
  return std::make_shared<MockChatBackend>(std::move(script));
}

std::shared_ptr<EmbedBackend> make_embed_backend(const BackendConfig& config) {
  config.validate();
  if (config.kind == BackendKind::kHttp) return std::make_shared<HttpEmbedBackend>(config);
  return std::make_shared<HashEmbedBackend>(config.dimension, config.seed);
}

}  // namespace mog
