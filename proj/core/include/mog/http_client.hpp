#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mog/model_gateway.hpp"

namespace mog {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string target;  // path plus query, always starts with '/'

  std::string origin() const;  // scheme://host:port
};

std::optional<Url> parse_url(std::string_view url);

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

using HttpHeaders = std::multimap<std::string, std::string>;

// One request, no retries. Throws Error(kTimeout) when the deadline passes
// and Error(kTransportFailure) for any other connection-level failure.
// Non-2xx statuses are returned, not thrown.
HttpResponse http_get(const Url& url, const HttpHeaders& headers, std::chrono::milliseconds timeout);
HttpResponse http_post(const Url& url, const HttpHeaders& headers, const std::string& body,
                       std::string_view content_type, std::chrono::milliseconds timeout);

// Percent-encodes a query component.
std::string url_encode(std::string_view s);

// Chat-completions client: POST {model, messages:[{role:user, content}],
// temperature, top_p} and read choices[0].message.content.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(BackendConfig config);

  std::string complete(const ChatRequest& request, std::string_view prompt,
                       std::string_view model) override;

  // Total HTTP attempts made by this backend so far.
  int attempts() const noexcept { return attempts_.load(); }

 private:
  BackendConfig config_;
  Url url_;
  std::atomic<int> attempts_{0};
};

// Embeddings client: POST {model, input:[...]} and read data[i].embedding,
// ordered by data[i].index.
class HttpEmbedBackend final : public EmbedBackend {
 public:
  explicit HttpEmbedBackend(BackendConfig config);

  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return config_.dimension; }

 private:
  BackendConfig config_;
  Url url_;
};

}  // namespace mog
