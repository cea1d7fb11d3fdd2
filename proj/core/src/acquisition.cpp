#include "mog/acquisition.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "mog/error.hpp"
#include "mog/html_text.hpp"
#include "mog/http_client.hpp"
#include "mog/organization.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

std::string read_file(const std::filesystem::path& path, ErrorCode code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(code, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_bullet_line(std::string_view line) {
  const std::string t = text::trim(line);
  if (t.empty()) return true;
  if (t[0] == '-' || t[0] == '*' || t.rfind("•", 0) == 0) return true;
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])) != 0) ++i;
  return i > 0 && i < t.size() && (t[i] == '.' || t[i] == ')');
}

// ['a', "b", ...] with backslash escapes; nullopt if the text is not exactly
// such a list.
std::optional<std::vector<std::string>> parse_quoted_list(std::string_view s) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])) != 0) ++i;
  };
  skip_ws();
  if (i >= s.size() || s[i] != '[') return std::nullopt;
  ++i;
  std::vector<std::string> items;
  while (true) {
    skip_ws();
    if (i >= s.size()) return std::nullopt;
    if (s[i] == ']') {
      ++i;
      break;
    }
    const char quote = s[i];
    if (quote != '\'' && quote != '"') return std::nullopt;
    ++i;
    std::string item;
    bool closed = false;
    while (i < s.size()) {
      const char c = s[i++];
      if (c == '\\' && i < s.size()) {
        const char e = s[i++];
        item.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
      } else if (c == quote) {
        closed = true;
        break;
      } else {
        item.push_back(c);
      }
    }
    if (!closed) return std::nullopt;
    items.push_back(std::move(item));
    skip_ws();
    if (i < s.size() && s[i] == ',') {
      ++i;
    } else if (i < s.size() && s[i] == ']') {
      ++i;
      break;
    } else {
      return std::nullopt;
    }
  }
  skip_ws();
  if (i != s.size()) return std::nullopt;
  return items;
}

std::optional<std::vector<std::string>> parse_json_list(std::string_view s) {
  const auto json = nlohmann::json::parse(s, nullptr, false);
  if (!json.is_array()) return std::nullopt;
  std::vector<std::string> items;
  for (const auto& j : json) {
    if (!j.is_string()) return std::nullopt;
    items.push_back(j.get<std::string>());
  }
  return items;
}

std::string topic_key(std::string_view s) { return text::to_lower(text::normalize_whitespace(s)); }

struct PageOutcome {
  bool fetched = false;
  SourceDocument doc;
  std::vector<std::string> facts;
  std::vector<Embedding> embeddings;
  int parse_failures = 0;
  std::vector<FailureRecord> failures;
};

PageOutcome process_page(const std::string& url, std::string_view root_topic, const AcquisitionConfig& cfg,
                         const ModelGateway& gateway, PageFetcher& fetcher) {
  PageOutcome out;
  try {
    out.doc = fetcher.fetch(url);
  } catch (const Error& e) {
    out.failures.push_back({"fetch", url, e.what()});
    return out;
  }
  if (text::trim(out.doc.text).empty()) {
    out.failures.push_back({"fetch", url, "page has no text"});
    return out;
  }
  out.fetched = true;
  try {
    ExtractionResult r = extract(gateway, root_topic, out.doc, cfg);
    out.parse_failures = r.parse_failures;
    for (auto& msg : r.errors) out.failures.push_back({"extract", url, std::move(msg)});
    out.facts = std::move(r.facts);
    if (!out.facts.empty()) out.embeddings = gateway.embed(out.facts);
  } catch (const Error& e) {
    out.failures.push_back({"extract", url, e.what()});
    out.facts.clear();
    out.embeddings.clear();
  }
  return out;
}

std::vector<std::string> parse_subtopics(std::string_view completion) {
  std::vector<std::string> out;
  const std::string body = strip_field_prefix(completion, "Subtopics");
  std::vector<std::string> lines;
  if (auto list = parse_json_list(text::trim(body))) {
    lines = *list;
  } else {
    lines = text::split_lines(body);
  }
  for (const auto& line : lines) {
    std::string s = text::normalize_whitespace(text::strip_list_marker(line));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

void ExplorationBudget::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw Error(ErrorCode::kInvalidConfig, std::string(name) + " must be positive");
  };
  positive(max_queries_per_topic, "max_queries_per_topic");
  positive(max_webpages_per_query, "max_webpages_per_query");
  positive(subtopics_per_round, "subtopics_per_round");
  if (max_subtopic_depth < 0) throw Error(ErrorCode::kInvalidConfig, "max_subtopic_depth must be non-negative");
  if (min_new_units_to_continue < 0) {
    throw Error(ErrorCode::kInvalidConfig, "min_new_units_to_continue must be non-negative");
  }
}

void AcquisitionConfig::validate() const {
  budget.validate();
  if (window_chars == 0 || window_overlap >= window_chars) {
    throw Error(ErrorCode::kInvalidConfig, "extraction window must exceed its overlap");
  }
}

FixtureSearch::FixtureSearch(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::kIoFailure, "search fixture directory '" + dir_.string() + "' not found");
  }
}

std::vector<std::string> FixtureSearch::search(std::string_view query, int k) {
  if (k < 1) throw Error(ErrorCode::kPrecondition, "search needs k >= 1");
  const auto file = dir_ / (text::slugify(query) + ".txt");
  if (!std::filesystem::exists(file)) return {};
  std::vector<std::string> urls;
  for (const auto& line : text::split_lines(read_file(file, ErrorCode::kSearchFailure))) {
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    urls.push_back(t);
    if (static_cast<int>(urls.size()) == k) break;
  }
  return urls;
}

HttpSearch::HttpSearch(std::string endpoint, std::string api_key_env, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), api_key_env_(std::move(api_key_env)), timeout_(timeout) {}

std::vector<std::string> HttpSearch::search(std::string_view query, int k) {
  if (k < 1) throw Error(ErrorCode::kPrecondition, "search needs k >= 1");
  std::string target = endpoint_ + (endpoint_.find('?') == std::string::npos ? "?" : "&");
  target += "q=" + url_encode(query) + "&num=" + std::to_string(k);
  if (const char* key = std::getenv(api_key_env_.c_str()); key != nullptr && *key != '\0') {
    target += "&api_key=" + url_encode(key);
  }
  const auto url = parse_url(target);
  if (!url) throw Error(ErrorCode::kSearchFailure, "invalid search endpoint '" + endpoint_ + "'");
  HttpResponse resp;
  try {
    resp = http_get(*url, {}, timeout_);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSearchFailure, std::string("search request failed: ") + e.what());
  }
  if (resp.status < 200 || resp.status >= 300) {
    throw Error(ErrorCode::kSearchFailure, "search returned HTTP " + std::to_string(resp.status));
  }
  const auto json = nlohmann::json::parse(resp.body, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    throw Error(ErrorCode::kSearchFailure, "search response is not a JSON object");
  }
  std::vector<std::string> urls;
  if (auto it = json.find("organic_results"); it != json.end() && it->is_array()) {
    for (const auto& r : *it) {
      if (r.is_object() && r.contains("link") && r["link"].is_string()) urls.push_back(r["link"]);
      if (static_cast<int>(urls.size()) == k) break;
    }
  }
  return urls;
}

std::string truncate_utf8(std::string_view s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return std::string(s);
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return std::string(s.substr(0, cut));
}

FixtureFetcher::FixtureFetcher(const std::filesystem::path& index_file, std::size_t max_chars)
    : base_(index_file.parent_path()), max_chars_(max_chars) {
  const auto json = nlohmann::json::parse(read_file(index_file, ErrorCode::kIoFailure), nullptr, false);
  if (!json.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "page index '" + index_file.string() + "' must be a JSON object");
  }
  for (const auto& [url, file] : json.items()) {
    if (!file.is_string()) {
      throw Error(ErrorCode::kInvalidConfig, "page index entry '" + url + "' must map to a file name");
    }
    files_[url] = file.get<std::string>();
  }
}

SourceDocument FixtureFetcher::fetch(std::string_view url) {
  auto it = files_.find(std::string(url));
  if (it == files_.end()) throw Error(ErrorCode::kFetchFailure, "no fixture page for '" + std::string(url) + "'");
  const std::filesystem::path file = base_ / it->second;
  const std::string raw = read_file(file, ErrorCode::kFetchFailure);
  SourceDocument doc;
  doc.url = std::string(url);
  const auto ext = text::to_lower(file.extension().string());
  if (ext == ".html" || ext == ".htm" || (ext != ".txt" && looks_like_html(raw))) {
    PageText page = html_to_text(raw);
    doc.title = std::move(page.title);
    doc.text = truncate_utf8(page.text, max_chars_);
  } else {
    doc.text = truncate_utf8(raw, max_chars_);
  }
  return doc;
}

HttpFetcher::HttpFetcher(std::chrono::milliseconds timeout, std::size_t max_chars)
    : timeout_(timeout), max_chars_(max_chars) {}

SourceDocument HttpFetcher::fetch(std::string_view url) {
  const auto parsed = parse_url(url);
  if (!parsed) throw Error(ErrorCode::kFetchFailure, "invalid URL '" + std::string(url) + "'");
  HttpResponse resp;
  try {
    resp = http_get(*parsed, {{"User-Agent", "mog/0.1"}}, timeout_);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFetchFailure, "fetching '" + std::string(url) + "': " + e.what());
  }
  if (resp.status < 200 || resp.status >= 300) {
    throw Error(ErrorCode::kFetchFailure,
                "fetching '" + std::string(url) + "': HTTP " + std::to_string(resp.status));
  }
  const std::string ct = text::to_lower(resp.content_type);
  SourceDocument doc;
  doc.url = std::string(url);
  doc.fetched_at = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  if (ct.find("html") != std::string::npos || (ct.empty() && looks_like_html(resp.body))) {
    PageText page = html_to_text(resp.body);
    doc.title = std::move(page.title);
    doc.text = truncate_utf8(page.text, max_chars_);
  } else if (ct.empty() || ct.rfind("text/", 0) == 0) {
    doc.text = truncate_utf8(resp.body, max_chars_);
  } else {
    throw Error(ErrorCode::kFetchFailure, "unsupported content type '" + ct + "' at '" + std::string(url) + "'");
  }
  return doc;
}

std::vector<std::string> make_queries(const ModelGateway& gateway, std::string_view topic, int n) {
  if (n < 1) throw Error(ErrorCode::kPrecondition, "make_queries needs n >= 1");
  std::vector<std::string> queries{std::string(topic)};
  if (n == 1) return queries;
  ChatRequest req;
  req.template_id = TemplateId::kQueryMaker;
  req.variables = {{"topic", std::string(topic)}, {"count", std::to_string(n - 1)}};
  std::set<std::string> seen{topic_key(topic)};
  for (const auto& q : parse_subtopics(strip_field_prefix(gateway.chat(req), "Queries"))) {
    if (static_cast<int>(queries.size()) == n) break;
    if (seen.insert(topic_key(q)).second) queries.push_back(q);
  }
  return queries;
}

std::vector<std::string> split_windows(std::string_view text, std::size_t window, std::size_t overlap) {
  if (window == 0 || overlap >= window) throw Error(ErrorCode::kPrecondition, "window must exceed overlap");
  std::vector<std::string> out;
  if (text.empty()) return out;
  auto boundary = [&](std::size_t pos) {
    while (pos > 0 && pos < text.size() && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) --pos;
    return pos;
  };
  std::size_t start = 0;
  while (true) {
    std::size_t end = start + window >= text.size() ? text.size() : boundary(start + window);
    if (end <= start) end = std::min(text.size(), start + window);  // degenerate multibyte run
    out.emplace_back(text.substr(start, end - start));
    if (end == text.size()) break;
    std::size_t next = boundary(end - overlap);
    if (next <= start) next = end;
    start = next;
  }
  return out;
}

std::vector<std::string> parse_string_list(std::string_view completion) {
  std::string s = text::trim(completion);
  if (s.rfind("```", 0) == 0) {
    const auto nl = s.find('\n');
    s = nl == std::string::npos ? std::string() : s.substr(nl + 1);
    const auto fence = s.rfind("```");
    if (fence != std::string::npos) s.erase(fence);
    s = text::trim(s);
  }
  s = strip_field_prefix(s, "Fact List");

  std::optional<std::vector<std::string>> items;
  const auto open = s.find('[');
  const auto close = s.rfind(']');
  if (open != std::string::npos && close != std::string::npos && close > open) {
    const std::string_view inner = std::string_view(s).substr(open, close - open + 1);
    items = parse_json_list(inner);
    if (!items) items = parse_quoted_list(inner);
  }
  if (!items && !s.empty() && s.find('[') == std::string::npos) {
    const auto lines = text::split_lines(s);
    if (std::all_of(lines.begin(), lines.end(), is_bullet_line)) {
      items.emplace();
      for (const auto& line : lines) items->push_back(text::strip_list_marker(line));
    }
  }
  if (!items) {
    std::string preview = truncate_utf8(s, 80);
    throw Error(ErrorCode::kParseFailure, "completion is not a list of strings: '" + preview + "'");
  }
  std::vector<std::string> out;
  for (const auto& item : *items) {
    std::string t = text::normalize_whitespace(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

ExtractionResult extract(const ModelGateway& gateway, std::string_view topic, const SourceDocument& doc,
                         const AcquisitionConfig& cfg) {
  if (text::trim(doc.text).empty()) throw Error(ErrorCode::kPrecondition, "document '" + doc.url + "' has no text");
  ExtractionResult result;
  std::set<std::string> seen;
  for (const auto& window : split_windows(doc.text, cfg.window_chars, cfg.window_overlap)) {
    ++result.windows;
    ChatRequest req;
    req.template_id = TemplateId::kExtract;
    req.variables = {{"topic", std::string(topic)}, {"text", window}};
    try {
      for (auto& fact : parse_string_list(gateway.chat(req))) {
        if (seen.insert(fact).second) result.facts.push_back(std::move(fact));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseFailure) throw;
      ++result.parse_failures;
      result.errors.emplace_back(e.what());
    }
  }
  return result;
}

const DocumentRecord* ConstructionReport::document(std::string_view id) const {
  for (const auto& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

ConstructionReport explore(std::string_view topic, const AcquisitionConfig& cfg, MemoryStore& store,
                           const ModelGateway& gateway, SearchBackend& search, PageFetcher& fetcher) {
  cfg.validate();
  if (store.topic() != topic) {
    throw Error(ErrorCode::kPrecondition,
                "store topic '" + store.topic() + "' differs from '" + std::string(topic) + "'");
  }
  const ExplorationBudget& budget = cfg.budget;
  ConstructionReport report;
  report.topic = std::string(topic);

  struct Pending {
    std::string name;
    int depth;
  };
  std::vector<Pending> frontier{{std::string(topic), 0}};
  std::set<std::string> known_topics{topic_key(topic)};
  std::set<std::string> fetched_urls;
  int doc_counter = 0;

  for (int depth = 0; !frontier.empty(); ++depth) {
    DepthStats stats;
    stats.depth = depth;
    stats.topics = static_cast<int>(frontier.size());
    std::vector<std::vector<std::string>> new_texts(frontier.size());
    std::vector<std::size_t> topic_index(frontier.size());

    for (std::size_t t = 0; t < frontier.size(); ++t) {
      const Pending& item = frontier[t];
      ExploredTopic explored{item.name, item.depth, 0, 0, false};
      std::vector<std::string> queries;
      try {
        queries = make_queries(gateway, item.name, budget.max_queries_per_topic);
      } catch (const Error& e) {
        report.failures.push_back({"queries", item.name, e.what()});
      }
      for (const auto& q : queries) {
        ++report.queries_issued;
        ++stats.queries;
        ++explored.queries;
        std::vector<std::string> urls;
        try {
          urls = search.search(q, budget.max_webpages_per_query);
        } catch (const Error& e) {
          ++report.search_failures;
          report.failures.push_back({"search", q, e.what()});
          continue;
        }
        std::vector<std::string> fresh;
        for (auto& u : urls) {
          if (static_cast<int>(fresh.size()) == budget.max_webpages_per_query) break;
          if (fetched_urls.insert(u).second) fresh.push_back(std::move(u));
        }
        std::vector<std::future<PageOutcome>> jobs;
        for (const auto& u : fresh) {
          jobs.push_back(std::async(std::launch::async, process_page, u, topic, std::cref(cfg),
                                    std::cref(gateway), std::ref(fetcher)));
        }
        for (auto& job : jobs) {
          PageOutcome page = job.get();
          report.parse_failures += page.parse_failures;
          for (auto& f : page.failures) {
            if (f.stage == "fetch") ++report.fetch_failures;
            report.failures.push_back(std::move(f));
          }
          if (!page.fetched) continue;
          ++report.pages_fetched;
          ++stats.pages_fetched;
          SourceDocument& doc = page.doc;
          doc.id = "d" + std::to_string(++doc_counter);
          doc.query = q;
          doc.subtopic = item.name;
          doc.subtopic_depth = item.depth;
          int saved = 0;
          for (std::size_t i = 0; i < page.facts.size(); ++i) {
            const std::size_t before = store.size();
            store.save(page.facts[i], topic, page.embeddings[i], doc.id);
            if (store.size() > before) {
              ++saved;
              new_texts[t].push_back(page.facts[i]);
            }
          }
          if (saved > 0) {
            ++report.pages_with_units;
            ++stats.pages_with_units;
          }
          report.units_saved += saved;
          stats.units_saved += saved;
          explored.new_units += saved;
          report.documents.push_back({doc.id, doc.url, doc.title, doc.query, doc.subtopic, doc.subtopic_depth,
                                      doc.fetched_at, doc.text.size(), saved});
        }
      }
      topic_index[t] = report.topics.size();
      report.topics.push_back(std::move(explored));
    }
    report.per_depth.push_back(stats);

    if (!cfg.subtopic_explorer || depth >= budget.max_subtopic_depth) break;
    std::vector<Pending> next;
    for (std::size_t t = 0; t < frontier.size(); ++t) {
      ExploredTopic& explored = report.topics[topic_index[t]];
      if (explored.new_units < budget.min_new_units_to_continue || new_texts[t].empty()) continue;
      try {
        const std::string summary = summarize_facts(gateway, explored.name, new_texts[t]);
        ChatRequest req;
        req.template_id = TemplateId::kSubtopicMaker;
        req.variables = {{"topic", std::string(topic)},
                         {"subtopic", explored.name},
                         {"summary", summary},
                         {"count", std::to_string(budget.subtopics_per_round)}};
        int added = 0;
        for (auto& s : parse_subtopics(gateway.chat(req))) {
          if (added == budget.subtopics_per_round) break;
          if (!known_topics.insert(topic_key(s)).second) continue;
          next.push_back({std::move(s), depth + 1});
          ++added;
        }
        explored.expanded = added > 0;
      } catch (const Error& e) {
        report.failures.push_back({"subtopics", explored.name, e.what()});
      }
    }
    if (next.empty()) break;
    ++report.subtopic_rounds;
    frontier = std::move(next);
  }

  if (report.units_saved == 0) {
    throw Error(ErrorCode::kInsufficientData,
                "no memory units collected for '" + std::string(topic) + "' (" +
                    std::to_string(report.queries_issued) + " queries, " + std::to_string(report.pages_fetched) +
                    " pages, " + std::to_string(report.failures.size()) + " failures)");
  }
  return report;
}

nlohmann::json report_to_json(const ConstructionReport& r) {
  nlohmann::json depths = nlohmann::json::array();
  for (const auto& d : r.per_depth) {
    depths.push_back({{"depth", d.depth},
                      {"topics", d.topics},
                      {"queries", d.queries},
                      {"pages_fetched", d.pages_fetched},
                      {"pages_with_units", d.pages_with_units},
                      {"units_saved", d.units_saved}});
  }
  nlohmann::json topics = nlohmann::json::array();
  for (const auto& t : r.topics) {
    topics.push_back({{"name", t.name},
                      {"depth", t.depth},
                      {"queries", t.queries},
                      {"new_units", t.new_units},
                      {"expanded", t.expanded}});
  }
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : r.documents) {
    docs.push_back({{"id", d.id},
                    {"url", d.url},
                    {"title", d.title},
                    {"query", d.query},
                    {"subtopic", d.subtopic},
                    {"subtopic_depth", d.subtopic_depth},
                    {"fetched_at", d.fetched_at},
                    {"chars", d.chars},
                    {"units_saved", d.units_saved}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"stage", f.stage}, {"target", f.target}, {"message", f.message}});
  }
  return {{"topic", r.topic},
          {"queries_issued", r.queries_issued},
          {"pages_fetched", r.pages_fetched},
          {"pages_with_units", r.pages_with_units},
          {"fetch_failures", r.fetch_failures},
          {"search_failures", r.search_failures},
          {"parse_failures", r.parse_failures},
          {"units_saved", r.units_saved},
          {"subtopic_rounds", r.subtopic_rounds},
          {"per_depth", depths},
          {"topics", topics},
          {"documents", docs},
          {"failures", failures}};
}

ConstructionReport report_from_json(const nlohmann::json& j) {
  try {
    ConstructionReport r;
    r.topic = j.at("topic").get<std::string>();
    r.queries_issued = j.at("queries_issued").get<int>();
    r.pages_fetched = j.at("pages_fetched").get<int>();
    r.pages_with_units = j.at("pages_with_units").get<int>();
    r.fetch_failures = j.value("fetch_failures", 0);
    r.search_failures = j.value("search_failures", 0);
    r.parse_failures = j.value("parse_failures", 0);
    r.units_saved = j.at("units_saved").get<int>();
    r.subtopic_rounds = j.at("subtopic_rounds").get<int>();
    for (const auto& d : j.at("per_depth")) {
      r.per_depth.push_back({d.at("depth").get<int>(), d.at("topics").get<int>(), d.at("queries").get<int>(),
                             d.at("pages_fetched").get<int>(), d.at("pages_with_units").get<int>(),
                             d.at("units_saved").get<int>()});
    }
    for (const auto& t : j.value("topics", nlohmann::json::array())) {
      r.topics.push_back({t.at("name").get<std::string>(), t.at("depth").get<int>(), t.at("queries").get<int>(),
                          t.at("new_units").get<int>(), t.at("expanded").get<bool>()});
    }
    for (const auto& d : j.at("documents")) {
      r.documents.push_back({d.at("id").get<std::string>(), d.at("url").get<std::string>(),
                             d.value("title", std::string()), d.value("query", std::string()),
                             d.value("subtopic", std::string()), d.value("subtopic_depth", 0),
                             d.value("fetched_at", std::int64_t{0}), d.value("chars", std::size_t{0}),
                             d.at("units_saved").get<int>()});
    }
    for (const auto& f : j.value("failures", nlohmann::json::array())) {
      r.failures.push_back({f.at("stage").get<std::string>(), f.at("target").get<std::string>(),
                            f.at("message").get<std::string>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseFailure, std::string("malformed construction report: ") + e.what());
  }
}

}  // namespace mog
