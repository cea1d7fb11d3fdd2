#include "mog/mock_backend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "mog/error.hpp"
#include "mog/segmenter.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

const std::string& var(const ChatRequest& r, const std::string& name) {
  static const std::string kEmpty;
  auto it = r.variables.find(name);
  return it == r.variables.end() ? kEmpty : it->second;
}

// Items of a prompt list variable: one per non-empty line, markers stripped.
std::vector<std::string> list_items(std::string_view block) {
  std::vector<std::string> items;
  for (const auto& line : text::split_lines(block)) {
    std::string item = text::strip_list_marker(line);
    if (!item.empty()) items.push_back(std::move(item));
  }
  return items;
}

std::set<std::string> token_set(std::string_view s) {
  auto tokens = text::content_tokens(s);
  return {tokens.begin(), tokens.end()};
}

bool is_number(const std::string& t) {
  return std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Most frequent eligible token (ties: first occurrence), or "" if none.
std::string salient_token(std::string_view s, const std::set<std::string>& exclude) {
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  for (const auto& t : text::content_tokens(s)) {
    if (t.size() < 3 || is_number(t) || exclude.contains(t)) continue;
    if (counts[t]++ == 0) order.push_back(t);
  }
  std::string best;
  int best_count = 0;
  for (const auto& t : order) {
    if (counts[t] > best_count) {
      best = t;
      best_count = counts[t];
    }
  }
  return best;
}

double coverage(const std::set<std::string>& claim, const std::set<std::string>& source) {
  if (claim.empty()) return 1.0;
  std::size_t hit = 0;
  for (const auto& t : claim) hit += source.contains(t) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(claim.size());
}

std::string respond_extract(const ChatRequest& r) {
  const auto topic = token_set(var(r, "topic"));
  nlohmann::json facts = nlohmann::json::array();
  for (const auto& sentence : segment_sentences(var(r, "text"))) {
    const auto tokens = token_set(sentence);
    const bool about_topic = !topic.empty() && std::all_of(topic.begin(), topic.end(), [&](const auto& t) {
      return tokens.contains(t);
    });
    const char last = sentence.empty() ? ' ' : sentence.back();
    const bool statement = last == '.' || last == '!' || last == '?';
    if (about_topic && statement) facts.push_back(text::normalize_whitespace(sentence));
  }
  return facts.dump();
}

std::string respond_query_maker(const ChatRequest& r) {
  static constexpr std::array<std::string_view, 6> kSuffixes = {
      "history", "overview", "facts", "background", "details", "news"};
  int count = 0;
  try {
    count = std::stoi(var(r, "count"));
  } catch (const std::exception&) {
    count = 1;
  }
  std::vector<std::string> lines;
  for (int i = 0; i < count && i < static_cast<int>(kSuffixes.size()); ++i) {
    lines.push_back(var(r, "topic") + " " + std::string(kSuffixes[static_cast<std::size_t>(i)]));
  }
  return text::join(lines, "\n");
}

std::string respond_subtopic_maker(const ChatRequest& r) {
  int count = 0;
  try {
    count = std::stoi(var(r, "count"));
  } catch (const std::exception&) {
    count = 1;
  }
  std::set<std::string> exclude = token_set(var(r, "topic"));
  for (const auto& t : token_set(var(r, "subtopic"))) exclude.insert(t);
  std::vector<std::string> lines;
  const std::string& summary = var(r, "summary");
  for (int i = 0; i < count; ++i) {
    const std::string t = salient_token(summary, exclude);
    if (t.empty()) break;
    lines.push_back(var(r, "topic") + " " + t);
    exclude.insert(t);
  }
  return text::join(lines, "\n");
}

std::string respond_outline_rewriter(const ChatRequest& r) {
  const auto info = list_items(var(r, "information_collected"));
  std::set<std::string> exclude = token_set(var(r, "section_title"));
  // Tokens shared by every summary do not tell the summaries apart.
  if (info.size() > 1) {
    std::set<std::string> common = token_set(info.front());
    for (std::size_t i = 1; i < info.size(); ++i) {
      const auto ts = token_set(info[i]);
      std::erase_if(common, [&](const std::string& t) { return !ts.contains(t); });
    }
    exclude.insert(common.begin(), common.end());
  }
  const auto info_tokens = token_set(var(r, "information_collected"));
  std::vector<std::string> headings;
  for (const auto& h : list_items(var(r, "current_outline"))) {
    if (coverage(token_set(h), info_tokens) == 1.0) headings.push_back(h);
  }
  for (const auto& line : info) {
    const std::string t = salient_token(line, exclude);
    if (!t.empty()) headings.push_back(capitalize(t));
  }
  return text::join(headings, "\n");
}

std::string respond_outline_refiner(const ChatRequest& r) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& h : list_items(var(r, "outline"))) {
    if (seen.insert(text::to_lower(h)).second) out.push_back(h);
  }
  return text::join(out, "\n");
}

std::string respond_section_writer(const ChatRequest& r) {
  std::vector<std::string> paragraphs;
  std::vector<std::string> current;
  for (auto fact : list_items(var(r, "fact_list"))) {
    const char last = fact.back();
    if (last != '.' && last != '!' && last != '?') fact.push_back('.');
    current.push_back(std::move(fact));
    if (current.size() == 4) {
      paragraphs.push_back(text::join(current, " "));
      current.clear();
    }
  }
  if (!current.empty()) paragraphs.push_back(text::join(current, " "));
  return text::join(paragraphs, "\n\n");
}

std::string respond_citation_finder(const ChatRequest& r) {
  std::set<std::string> remaining = token_set(var(r, "claim"));
  std::vector<std::set<std::string>> sources;
  for (const auto& line : text::split_lines(var(r, "source_list"))) {
    const auto close = line.find(']');
    if (line.empty() || line.front() != '[' || close == std::string::npos) continue;
    sources.push_back(token_set(std::string_view(line).substr(close + 1)));
  }
  std::vector<std::size_t> chosen;
  while (!remaining.empty()) {
    std::size_t best = sources.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      std::size_t gain = 0;
      for (const auto& t : remaining) gain += sources[i].contains(t) ? 1 : 0;
      if (gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    if (best == sources.size()) break;
    chosen.push_back(best);
    for (const auto& t : sources[best]) remaining.erase(t);
  }
  std::sort(chosen.begin(), chosen.end());
  return nlohmann::json(chosen).dump();
}

// The two facts sharing the most content tokens with the rest, in input order.
std::string respond_summarizer(const ChatRequest& r) {
  const auto facts = list_items(var(r, "fact_list"));
  if (facts.size() <= 2) return text::join(facts, " ");
  std::vector<std::set<std::string>> tokens;
  for (const auto& f : facts) tokens.push_back(token_set(f));
  std::vector<std::pair<std::size_t, std::size_t>> score;  // (overlap, index)
  for (std::size_t i = 0; i < facts.size(); ++i) {
    std::size_t overlap = 0;
    for (std::size_t j = 0; j < facts.size(); ++j) {
      if (i == j) continue;
      for (const auto& t : tokens[i]) overlap += tokens[j].contains(t) ? 1 : 0;
    }
    score.emplace_back(overlap, i);
  }
  std::stable_sort(score.begin(), score.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::size_t first = std::min(score[0].second, score[1].second);
  std::size_t second = std::max(score[0].second, score[1].second);
  return facts[first] + " " + facts[second];
}

std::string respond_entailment(const ChatRequest& r, double threshold) {
  const double c = coverage(token_set(var(r, "claim")), token_set(var(r, "source")));
  return c >= threshold ? "Yes" : "No";
}

}  // namespace

std::string default_mock_response(const ChatRequest& r) {
  switch (r.template_id) {
    case TemplateId::kExtract: return respond_extract(r);
    case TemplateId::kOutliner: return "Overview";
    case TemplateId::kOutlineRewriter: return respond_outline_rewriter(r);
    case TemplateId::kOutlineRefiner: return respond_outline_refiner(r);
    case TemplateId::kSectionWriter: return respond_section_writer(r);
    case TemplateId::kSectionRefiner: return var(r, "text");
    case TemplateId::kCitationFinder: return respond_citation_finder(r);
    case TemplateId::kEntailer: return respond_entailment(r, 0.8);
    case TemplateId::kPartialEntailer: return respond_entailment(r, 0.5);
    case TemplateId::kSummarizer: return respond_summarizer(r);
    case TemplateId::kQueryMaker: return respond_query_maker(r);
    case TemplateId::kSubtopicMaker: return respond_subtopic_maker(r);
  }
  return {};
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open mock script '" + path.string() + "'");
  auto json = nlohmann::json::parse(in, nullptr, false);
  if (json.is_discarded()) {
    throw Error(ErrorCode::kInvalidConfig, "mock script '" + path.string() + "' is not valid JSON");
  }
  try {
    return from_json(json);
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

MockScript MockScript::from_json(const nlohmann::json& json) {
  auto as_text = [](const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  auto template_of = [](const std::string& name, const std::string& where) {
    auto id = template_from_name(name);
    if (!id) throw Error(ErrorCode::kInvalidConfig, where + ": unknown template '" + name + "'");
    return *id;
  };
  if (!json.is_object()) throw Error(ErrorCode::kInvalidConfig, "mock script must be a JSON object");
  MockScript script;
  for (const auto& [key, value] : json.items()) {
    if (key == "strict") {
      script.strict = value.get<bool>();
    } else if (key == "defaults") {
      for (const auto& [name, response] : value.items()) {
        script.set_default(template_of(name, "/defaults/" + name), as_text(response));
      }
    } else if (key == "responses") {
      std::size_t i = 0;
      for (const auto& rule : value) {
        const std::string where = "/responses/" + std::to_string(i++);
        if (!rule.contains("template") || !rule.contains("response")) {
          throw Error(ErrorCode::kInvalidConfig, where + ": needs 'template' and 'response'");
        }
        std::map<std::string, std::string> match;
        if (rule.contains("match")) {
          for (const auto& [name, v] : rule.at("match").items()) match[name] = as_text(v);
        }
        script.add(template_of(rule.at("template").get<std::string>(), where), std::move(match),
                   as_text(rule.at("response")));
      }
    } else {
      throw Error(ErrorCode::kInvalidConfig, "/" + key + ": unknown key");
    }
  }
  return script;
}

void MockScript::add(TemplateId id, std::map<std::string, std::string> match, std::string response) {
  rules_.push_back(MockRule{id, std::move(match), std::move(response)});
}

void MockScript::set_default(TemplateId id, std::string response) {
  defaults_[id] = std::move(response);
}

std::optional<std::string> MockScript::lookup(const ChatRequest& request) const {
  for (const auto& rule : rules_) {
    if (rule.template_id != request.template_id) continue;
    const bool matches = std::all_of(rule.match.begin(), rule.match.end(), [&](const auto& kv) {
      auto it = request.variables.find(kv.first);
      return it != request.variables.end() && it->second == kv.second;
    });
    if (matches) return rule.response;
  }
  if (auto it = defaults_.find(request.template_id); it != defaults_.end()) return it->second;
  return std::nullopt;
}

MockChatBackend::MockChatBackend(MockScript script) : script_(std::move(script)) {}

std::string MockChatBackend::complete(const ChatRequest& request, std::string_view /*prompt*/,
                                      std::string_view /*model*/) {
  ++calls_;
  {
    std::lock_guard lock(mu_);
    ++per_template_[request.template_id];
  }
  if (auto scripted = script_.lookup(request)) return *scripted;
  if (script_.strict) {
    throw Error(ErrorCode::kMockScriptMiss,
                "no scripted response for template '" + std::string(template_name(request.template_id)) + "'");
  }
  return default_mock_response(request);
}

std::size_t MockChatBackend::calls(TemplateId id) const {
  std::lock_guard lock(mu_);
  auto it = per_template_.find(id);
  return it == per_template_.end() ? 0 : it->second;
}

HashEmbedBackend::HashEmbedBackend(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidConfig, "embedding dimension must be positive");
}

std::size_t HashEmbedBackend::bucket(std::string_view token) const {
  return static_cast<std::size_t>(text::fnv1a64(token, seed_) % dimension_);
}

Embedding HashEmbedBackend::embed_text(std::string_view s) const {
  Embedding v(dimension_, 0.0);
  auto tokens = text::content_tokens(s);
  if (tokens.empty()) tokens = text::tokenize(s);
  for (const auto& t : tokens) v[bucket(t)] += 1.0;
  const double norm = l2_norm(v);
  if (norm > 0.0) {
    for (auto& x : v) x /= norm;
  }
  return v;
}

std::vector<Embedding> HashEmbedBackend::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "embed() called with no texts");
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_text(t));
  return out;
}

}  // namespace mog
