#include "mog/http_client.hpp"

#include <cctype>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mog/error.hpp"

namespace mog {
namespace {

using Clock = std::chrono::steady_clock;

void apply_timeouts(httplib::Client& client, std::chrono::milliseconds timeout) {
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_follow_location(true);
}

HttpResponse finish(const httplib::Result& res, const Url& url, Clock::time_point start,
                    std::chrono::milliseconds timeout) {
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && elapsed >= timeout * 9 / 10);
    const std::string what = url.origin() + url.target + ": " + httplib::to_string(err);
    throw Error(timed_out ? ErrorCode::kTimeout : ErrorCode::kTransportFailure, what);
  }
  HttpResponse out;
  out.status = res->status;
  out.body = res->body;
  out.content_type = res->get_header_value("Content-Type");
  return out;
}

httplib::Headers to_httplib(const HttpHeaders& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

HttpHeaders auth_headers(const std::string& api_key_env) {
  HttpHeaders headers;
  if (!api_key_env.empty()) {
    if (const char* key = std::getenv(api_key_env.c_str()); key != nullptr && *key != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  return headers;
}

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

// Runs `attempt` up to retries + 1 times with exponential backoff between
// tries. Transport errors and retryable statuses are retried; the last error
// is rethrown.
template <typename F>
HttpResponse with_retries(const BackendConfig& config, std::atomic<int>* counter, F&& attempt) {
  std::optional<Error> last;
  auto delay = config.backoff;
  for (int i = 0; i <= config.retries; ++i) {
    if (i > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    if (counter != nullptr) ++*counter;
    HttpResponse res;
    try {
      res = attempt();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTimeout && e.code() != ErrorCode::kTransportFailure) throw;
      last = e;
      continue;
    }
    if (res.status >= 200 && res.status < 300) return res;
    Error err(ErrorCode::kTransportFailure,
              "HTTP status " + std::to_string(res.status) + ": " + res.body.substr(0, 200));
    if (!retryable_status(res.status)) throw err;
    last = err;
  }
  const int attempts = config.retries + 1;
  throw last->with_context("after " + std::to_string(attempts) + " attempts");
}

}  // namespace

std::string Url::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

std::optional<Url> parse_url(std::string_view raw) {
  Url url;
  const auto sep = raw.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  url.scheme = std::string(raw.substr(0, sep));
  for (auto& c : url.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
  std::string_view rest = raw.substr(sep + 3);
  const auto slash = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, slash);
  std::string_view target = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  if (const auto hash = target.find('#'); hash != std::string_view::npos) target = target.substr(0, hash);
  if (authority.empty()) return std::nullopt;
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  url.port = url.scheme == "https" ? 443 : 80;
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos &&
                                               authority.find(']') == std::string_view::npos) {
    const std::string port(authority.substr(colon + 1));
    if (port.empty() || port.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    url.port = std::stoi(port);
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  url.host = std::string(authority);
  url.target = target.empty() ? "/" : std::string(target);
  if (url.target.front() == '?') url.target.insert(0, "/");
  return url;
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) != 0 || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    }
  }
  return out;
}

HttpResponse http_get(const Url& url, const HttpHeaders& headers, std::chrono::milliseconds timeout) {
  httplib::Client client(url.origin());
  apply_timeouts(client, timeout);
  const auto start = Clock::now();
  auto res = client.Get(url.target, to_httplib(headers));
  return finish(res, url, start, timeout);
}

HttpResponse http_post(const Url& url, const HttpHeaders& headers, const std::string& body,
                       std::string_view content_type, std::chrono::milliseconds timeout) {
  httplib::Client client(url.origin());
  apply_timeouts(client, timeout);
  const auto start = Clock::now();
  auto res = client.Post(url.target, to_httplib(headers), body, std::string(content_type));
  return finish(res, url, start, timeout);
}

HttpChatBackend::HttpChatBackend(BackendConfig config) : config_(std::move(config)) {
  config_.validate();
  url_ = *parse_url(config_.endpoint);
}

std::string HttpChatBackend::complete(const ChatRequest& request, std::string_view prompt,
                                      std::string_view model) {
  nlohmann::json payload = {
      {"model", model.empty() ? config_.model_name : std::string(model)},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", request.temperature},
      {"top_p", request.top_p},
  };
  const std::string body = payload.dump();
  const HttpHeaders headers = auth_headers(config_.api_key_env);
  HttpResponse res = with_retries(config_, &attempts_, [&] {
    return http_post(url_, headers, body, "application/json", config_.timeout);
  });
  auto json = nlohmann::json::parse(res.body, nullptr, false);
  try {
    if (json.is_discarded()) throw std::runtime_error("body is not JSON");
    const auto& content = json.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string{} : content.get<std::string>();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParseFailure, std::string("malformed chat completion: ") + e.what());
  }
}

HttpEmbedBackend::HttpEmbedBackend(BackendConfig config) : config_(std::move(config)) {
  config_.validate();
  url_ = *parse_url(config_.endpoint);
}

std::vector<Embedding> HttpEmbedBackend::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "embed() called with no texts");
  nlohmann::json payload = {{"model", config_.model_name}, {"input", texts}};
  const std::string body = payload.dump();
  const HttpHeaders headers = auth_headers(config_.api_key_env);
  HttpResponse res = with_retries(config_, nullptr, [&] {
    return http_post(url_, headers, body, "application/json", config_.timeout);
  });
  std::vector<Embedding> out(texts.size());
  try {
    auto json = nlohmann::json::parse(res.body);
    const auto& data = json.at("data");
    if (data.size() != texts.size()) throw std::runtime_error("wrong number of vectors");
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::size_t index = data[i].value("index", i);
      if (index >= out.size()) throw std::runtime_error("index out of range");
      out[index] = data[i].at("embedding").get<Embedding>();
    }
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParseFailure, std::string("malformed embedding response: ") + e.what());
  }
  return out;
}

}  // namespace mog
