#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mog/memory_store.hpp"
#include "mog/model_gateway.hpp"

namespace mog {

struct SourceDocument {
  std::string id;
  std::string url;
  std::string title;
  std::string text;
  std::int64_t fetched_at = 0;  // unix seconds; 0 for fixture pages
  std::string query;
  std::string subtopic;
  int subtopic_depth = 0;
};

struct ExplorationBudget {
  int max_queries_per_topic = 2;
  int max_webpages_per_query = 3;
  int max_subtopic_depth = 2;  // 0 processes the root topic only
  int min_new_units_to_continue = 3;
  int subtopics_per_round = 3;  // subtopics requested per expanded topic

  void validate() const;  // Error(kInvalidConfig)
};

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  // Up to k URLs in rank order; empty when nothing matches.
  virtual std::vector<std::string> search(std::string_view query, int k) = 0;
};

// Directory of "<slugified query>.txt" files, one URL per line; blank lines
// and lines starting with '#' are ignored.
class FixtureSearch final : public SearchBackend {
 public:
  explicit FixtureSearch(std::filesystem::path dir);
  std::vector<std::string> search(std::string_view query, int k) override;

 private:
  std::filesystem::path dir_;
};

// GET <endpoint>?api_key=<key>&q=<query>&num=<k>, reading organic_results[].link.
class HttpSearch final : public SearchBackend {
 public:
  HttpSearch(std::string endpoint, std::string api_key_env, std::chrono::milliseconds timeout);
  std::vector<std::string> search(std::string_view query, int k) override;

 private:
  std::string endpoint_;
  std::string api_key_env_;
  std::chrono::milliseconds timeout_;
};

class PageFetcher {
 public:
  virtual ~PageFetcher() = default;
  // Returns url/title/text/fetched_at filled in; throws Error(kFetchFailure).
  virtual SourceDocument fetch(std::string_view url) = 0;
};

// JSON object mapping URL → file path (relative to the index file). HTML
// files are stripped to text; anything else is passed through.
class FixtureFetcher final : public PageFetcher {
 public:
  FixtureFetcher(const std::filesystem::path& index_file, std::size_t max_chars);
  SourceDocument fetch(std::string_view url) override;

 private:
  std::filesystem::path base_;
  std::map<std::string, std::string> files_;
  std::size_t max_chars_;
};

class HttpFetcher final : public PageFetcher {
 public:
  HttpFetcher(std::chrono::milliseconds timeout, std::size_t max_chars);
  SourceDocument fetch(std::string_view url) override;

 private:
  std::chrono::milliseconds timeout_;
  std::size_t max_chars_;
};

// Cuts at a UTF-8 character boundary at or below max_bytes.
std::string truncate_utf8(std::string_view s, std::size_t max_bytes);

struct AcquisitionConfig {
  ExplorationBudget budget;
  bool subtopic_explorer = true;
  std::size_t window_chars = 4000;
  std::size_t window_overlap = 200;

  void validate() const;
};

std::vector<std::string> make_queries(const ModelGateway& gateway, std::string_view topic, int n);

// Overlapping windows covering `text`; one window when it fits.
std::vector<std::string> split_windows(std::string_view text, std::size_t window, std::size_t overlap);

// Accepts a JSON string list (optionally fenced or prefixed with the output
// field name), a Python-style quoted list, or a bullet list. Throws
// Error(kParseFailure) otherwise.
std::vector<std::string> parse_string_list(std::string_view completion);

struct ExtractionResult {
  std::vector<std::string> facts;
  int windows = 0;
  int parse_failures = 0;
  std::vector<std::string> errors;
};

// Per-window extraction. Unparseable windows are skipped and counted.
ExtractionResult extract(const ModelGateway& gateway, std::string_view topic, const SourceDocument& doc,
                         const AcquisitionConfig& cfg = {});

struct DepthStats {
  int depth = 0;
  int topics = 0;
  int queries = 0;
  int pages_fetched = 0;
  int pages_with_units = 0;
  int units_saved = 0;
};

struct ExploredTopic {
  std::string name;
  int depth = 0;
  int queries = 0;
  int new_units = 0;
  bool expanded = false;
};

struct DocumentRecord {
  std::string id;
  std::string url;
  std::string title;
  std::string query;
  std::string subtopic;
  int subtopic_depth = 0;
  std::int64_t fetched_at = 0;
  std::size_t chars = 0;
  int units_saved = 0;  // new units attributed to this page
};

struct FailureRecord {
  std::string stage;  // search | fetch | extract | summarize
  std::string target;
  std::string message;
};

struct ConstructionReport {
  std::string topic;
  int queries_issued = 0;
  int pages_fetched = 0;
  int pages_with_units = 0;
  int fetch_failures = 0;
  int search_failures = 0;
  int parse_failures = 0;
  int units_saved = 0;
  int subtopic_rounds = 0;
  std::vector<DepthStats> per_depth;
  std::vector<ExploredTopic> topics;
  std::vector<DocumentRecord> documents;
  std::vector<FailureRecord> failures;

  const DocumentRecord* document(std::string_view id) const;
};

nlohmann::json report_to_json(const ConstructionReport& report);
ConstructionReport report_from_json(const nlohmann::json& json);

// Breadth-first memory construction. Every unit is saved under the root topic
// label with the fetching document as provenance. Throws
// Error(kInsufficientData) if nothing was saved.
ConstructionReport explore(std::string_view topic, const AcquisitionConfig& cfg, MemoryStore& store,
                           const ModelGateway& gateway, SearchBackend& search, PageFetcher& fetcher);

}  // namespace mog
