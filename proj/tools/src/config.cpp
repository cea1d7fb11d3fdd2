#include "mog/cli/config.hpp"

#include <fstream>
#include <set>

#include "mog/error.hpp"

namespace mog::cli {
namespace {

using nlohmann::json;

std::string pointer_escape(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, (where.empty() ? std::string("/") : where) + ": " + what);
}

// Reads keys from one JSON object, remembering which were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string where, std::filesystem::path base)
      : j_(j), where_(std::move(where)), base_(std::move(base)) {
    if (!j_.is_object()) fail(where_, "expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    if (const json* v = take(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception&) {
        fail(at(key), "has the wrong type");
      }
    }
  }

  void read_positive(const char* key, int& out) {
    read(key, out);
    if (j_.contains(key) && out < 1) fail(at(key), "must be positive");
  }

  void read_ms(const char* key, std::chrono::milliseconds& out) {
    long long ms = out.count();
    read(key, ms);
    if (ms < 1) fail(at(key), "must be a positive number of milliseconds");
    out = std::chrono::milliseconds(ms);
  }

  void read_path(const char* key, std::filesystem::path& out) {
    std::string s;
    if (j_.contains(key)) {
      read(key, s);
      out = resolve(s);
    }
  }

  void read_kind(const char* key, BackendKind& out) {
    std::string s;
    if (!j_.contains(key)) return;
    read(key, s);
    if (s == "mock") {
      out = BackendKind::kMock;
    } else if (s == "http") {
      out = BackendKind::kHttp;
    } else {
      fail(at(key), "must be \"mock\" or \"http\"");
    }
  }

  void read_source_kind(const char* key, SourceKind& out) {
    std::string s;
    if (!j_.contains(key)) return;
    read(key, s);
    if (s == "fixture") {
      out = SourceKind::kFixture;
    } else if (s == "http") {
      out = SourceKind::kHttp;
    } else {
      fail(at(key), "must be \"fixture\" or \"http\"");
    }
  }

  std::optional<Section> child(const char* key) {
    if (const json* v = take(key)) return Section(*v, at(key), base_);
    return std::nullopt;
  }

  const json* take(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  std::filesystem::path resolve(const std::string& s) const {
    std::filesystem::path p(s);
    return p.is_absolute() ? p : base_ / p;
  }

  std::string at(std::string_view key) const { return where_ + "/" + pointer_escape(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) fail(at(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::filesystem::path base_;
  std::set<std::string> seen_;
};

void read_backend(Section& s, BackendConfig& b) {
  s.read_kind("kind", b.kind);
  s.read("endpoint", b.endpoint);
  s.read("model", b.model_name);
  s.read_positive("max_concurrency", b.max_concurrency);
  s.read_ms("timeout_ms", b.timeout);
  s.read("retries", b.retries);
  if (b.retries < 0) fail(s.at("retries"), "must be non-negative");
  s.read_ms("backoff_ms", b.backoff);
  s.read("api_key_env", b.api_key_env);
}

}  // namespace

void PipelineConfig::validate() const {
  acquisition.validate();
  organization.validate();
  chat.validate();
  embed.validate();
  if (pages.max_document_chars == 0) {
    throw Error(ErrorCode::kInvalidConfig, "/pages/max_document_chars: must be positive");
  }
}

void PipelineConfig::validate_sources() const {
  if (search.kind == SourceKind::kFixture && search.fixture_dir.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "/search/fixture_dir: required for fixture search");
  }
  if (search.kind == SourceKind::kHttp && search.endpoint.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "/search/endpoint: required for http search");
  }
  if (pages.kind == SourceKind::kFixture && pages.index.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "/pages/index: required for fixture pages");
  }
}

PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  Section root(j, "", base_dir);
  root.read("seed", cfg.seed);
  cfg.organization.seed = cfg.seed;
  cfg.chat.seed = cfg.seed;
  cfg.embed.seed = cfg.seed;

  if (auto s = root.child("budget")) {
    ExplorationBudget& b = cfg.acquisition.budget;
    s->read("max_queries_per_topic", b.max_queries_per_topic);
    s->read("max_webpages_per_query", b.max_webpages_per_query);
    s->read("max_subtopic_depth", b.max_subtopic_depth);
    s->read("min_new_units_to_continue", b.min_new_units_to_continue);
    s->read("subtopics_per_round", b.subtopics_per_round);
    s->finish();
  }
  if (auto s = root.child("extraction")) {
    s->read("window_chars", cfg.acquisition.window_chars);
    s->read("window_overlap", cfg.acquisition.window_overlap);
    s->finish();
  }
  if (auto s = root.child("organization")) {
    OrganizeConfig& o = cfg.organization;
    if (const json* k = s->take("k"); k != nullptr && !k->is_null()) {
      if (!k->is_number_unsigned() || k->get<std::size_t>() == 0) fail(s->at("k"), "must be a positive integer or null");
      o.k = k->get<std::size_t>();
    }
    s->read("min_k", o.min_k);
    s->read("max_k", o.max_k);
    s->read("recursion_threshold", o.recursion_threshold);
    s->read("max_outline_depth", o.max_outline_depth);
    s->read("kmeans_restarts", o.kmeans.restarts);
    s->read("kmeans_max_iterations", o.kmeans.max_iterations);
    s->finish();
  }
  if (auto s = root.child("generation")) {
    s->read("cite", cfg.generation.cite);
    s->read("refine", cfg.generation.refine);
    s->read("lead_candidates", cfg.generation.lead_candidates);
    s->read("lead_heading", cfg.generation.lead_heading);
    s->finish();
  }
  if (auto s = root.child("chat")) {
    read_backend(*s, cfg.chat);
    s->read_path("mock_script", cfg.chat.mock_script);
    s->read("strict", cfg.chat.strict);
    s->finish();
  }
  if (auto s = root.child("embed")) {
    read_backend(*s, cfg.embed);
    s->read("dimension", cfg.embed.dimension);
    if (cfg.embed.dimension == 0) fail(s->at("dimension"), "must be positive");
    s->finish();
  }
  if (auto s = root.child("models")) {
    s->read("strong", cfg.routing.strong_model);
    s->read("fast", cfg.routing.fast_model);
    if (auto o = s->child("overrides")) {
      if (const json* obj = s->take("overrides")) {
        for (const auto& [name, model] : obj->items()) {
          const auto id = template_from_name(name);
          if (!id) fail(o->at(name), "unknown template");
          if (!model.is_string()) fail(o->at(name), "must be a model name");
          cfg.routing.overrides[*id] = model.get<std::string>();
        }
      }
    }
    s->finish();
  }
  if (auto s = root.child("search")) {
    s->read_source_kind("kind", cfg.search.kind);
    s->read_path("fixture_dir", cfg.search.fixture_dir);
    s->read("endpoint", cfg.search.endpoint);
    s->read("api_key_env", cfg.search.api_key_env);
    s->read_ms("timeout_ms", cfg.search.timeout);
    s->finish();
  }
  if (auto s = root.child("pages")) {
    s->read_source_kind("kind", cfg.pages.kind);
    s->read_path("index", cfg.pages.index);
    s->read_ms("timeout_ms", cfg.pages.timeout);
    s->read("max_document_chars", cfg.pages.max_document_chars);
    s->finish();
  }
  if (auto s = root.child("paths")) {
    std::filesystem::path p;
    s->read_path("store", p);
    if (!p.empty()) cfg.store_path = p;
    p.clear();
    s->read_path("output", p);
    if (!p.empty()) cfg.output_dir = p;
    s->finish();
  }
  root.finish();

  // The chat model for http backends defaults to the routing table.
  if (cfg.chat.model_name.empty()) cfg.chat.model_name = cfg.routing.strong_model;
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read config '" + path.string() + "'");
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kInvalidConfig, "config '" + path.string() + "' is not valid JSON");
  try {
    return parse_config(j, std::filesystem::absolute(path).parent_path());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  auto kind = [](BackendKind k) { return k == BackendKind::kHttp ? "http" : "mock"; };
  auto source = [](SourceKind k) { return k == SourceKind::kHttp ? "http" : "fixture"; };
  const auto& b = c.acquisition.budget;
  const auto& o = c.organization;
  json overrides = json::object();
  for (const auto& [id, model] : c.routing.overrides) overrides[std::string(template_name(id))] = model;
  return {
      {"seed", c.seed},
      {"budget",
       {{"max_queries_per_topic", b.max_queries_per_topic},
        {"max_webpages_per_query", b.max_webpages_per_query},
        {"max_subtopic_depth", b.max_subtopic_depth},
        {"min_new_units_to_continue", b.min_new_units_to_continue},
        {"subtopics_per_round", b.subtopics_per_round}}},
      {"extraction", {{"window_chars", c.acquisition.window_chars}, {"window_overlap", c.acquisition.window_overlap}}},
      {"organization",
       {{"k", o.k ? json(*o.k) : json(nullptr)},
        {"min_k", o.min_k},
        {"max_k", o.max_k},
        {"recursion_threshold", o.recursion_threshold},
        {"max_outline_depth", o.max_outline_depth},
        {"kmeans_restarts", o.kmeans.restarts},
        {"kmeans_max_iterations", o.kmeans.max_iterations}}},
      {"generation",
       {{"cite", c.generation.cite},
        {"refine", c.generation.refine},
        {"lead_candidates", c.generation.lead_candidates},
        {"lead_heading", c.generation.lead_heading}}},
      {"chat", {{"kind", kind(c.chat.kind)}, {"endpoint", c.chat.endpoint}, {"model", c.chat.model_name}}},
      {"embed", {{"kind", kind(c.embed.kind)}, {"endpoint", c.embed.endpoint}, {"dimension", c.embed.dimension}}},
      {"models", {{"strong", c.routing.strong_model}, {"fast", c.routing.fast_model}, {"overrides", overrides}}},
      {"search", {{"kind", source(c.search.kind)}, {"endpoint", c.search.endpoint}}},
      {"pages", {{"kind", source(c.pages.kind)}, {"max_document_chars", c.pages.max_document_chars}}},
  };
}

}  // namespace mog::cli
