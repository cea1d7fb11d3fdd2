#include "mog/generation.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <numeric>
#include <set>

#include "mog/error.hpp"
#include "mog/segmenter.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

void collect(const Section& s, std::vector<const Sentence*>& out) {
  for (const auto& sentence : s.sentences) out.push_back(&sentence);
  for (const auto& c : s.children) collect(c, out);
}

void collect_mut(Section& s, std::vector<Sentence*>& out) {
  for (auto& sentence : s.sentences) out.push_back(&sentence);
  for (auto& c : s.children) collect_mut(c, out);
}

Section mirror(const OutlineNode& node) {
  Section s{node.heading, node.path, node.depth, {}, {}};
  for (const auto& c : node.children) s.children.push_back(mirror(c));
  return s;
}

Section* find_section(Section& s, const std::string& path) {
  if (s.path == path) return &s;
  for (auto& c : s.children) {
    if (Section* found = find_section(c, path)) return found;
  }
  return nullptr;
}

std::vector<MemoryUnit> units_for(const MemoryStore& store, const std::vector<std::string>& ids) {
  std::vector<MemoryUnit> units;
  for (const auto& id : ids) {
    auto u = store.find(id);
    if (!u) throw Error(ErrorCode::kUnknownUnit, "outline references unknown unit '" + id + "'");
    units.push_back(std::move(*u));
  }
  return units;
}

struct SectionOutput {
  std::vector<Sentence> sentences;
  int parse_failures = 0;
};

void cite_sentences(const ModelGateway& gateway, std::vector<Sentence>& sentences,
                    const std::vector<MemoryUnit>& candidates, int& parse_failures) {
  for (auto& s : sentences) {
    try {
      s.citations = find_citations(gateway, s.text, candidates);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseFailure) throw;
      ++parse_failures;
      s.citations.clear();
    }
  }
}

SectionOutput generate_leaf(const OutlineNode& leaf, const std::string& topic, const MemoryStore& store,
                            const ModelGateway& gateway, const GenerationConfig& cfg) {
  try {
    SectionOutput out;
    const auto units = units_for(store, leaf.assigned_unit_ids);
    std::string prose = write_section(gateway, topic, leaf.heading, units);
    if (cfg.refine && !text::trim(prose).empty()) prose = refine_section(gateway, topic, leaf.heading, prose);
    out.sentences = to_sentences(prose);
    if (cfg.cite) cite_sentences(gateway, out.sentences, units, out.parse_failures);
    return out;
  } catch (const Error& e) {
    throw e.with_context("section '" + leaf.path + "'");
  }
}

}  // namespace

std::vector<const Sentence*> Article::sentences() const {
  std::vector<const Sentence*> out;
  for (const auto& s : lead) out.push_back(&s);
  collect(body, out);
  return out;
}

std::optional<int> Article::reference_number(const std::string& unit_id) const {
  auto it = unit_sources.find(unit_id);
  if (it == unit_sources.end()) return std::nullopt;
  for (const auto& r : references) {
    if (r.source_doc_id == it->second) return r.number;
  }
  return std::nullopt;
}

std::string clean_section_text(std::string_view completion, std::string_view heading) {
  std::string s = strip_field_prefix(completion, "Section content");
  const auto nl = s.find('\n');
  std::string first = text::trim(std::string_view(s).substr(0, nl));
  std::size_t hashes = 0;
  while (hashes < first.size() && first[hashes] == '#') ++hashes;
  first = text::trim(std::string_view(first).substr(hashes));
  if (!first.empty() && text::iequals(first, text::normalize_whitespace(heading))) {
    s = nl == std::string::npos ? std::string() : text::trim(std::string_view(s).substr(nl + 1));
  }
  return s;
}

std::string write_section(const ModelGateway& gateway, std::string_view topic, std::string_view heading,
                          const std::vector<MemoryUnit>& units) {
  if (units.empty()) {
    throw Error(ErrorCode::kPrecondition, "section '" + std::string(heading) + "' has no memory units");
  }
  std::vector<std::string> facts;
  for (const auto& u : units) facts.push_back(u.text);
  ChatRequest req;
  req.template_id = TemplateId::kSectionWriter;
  req.variables = {{"topic", std::string(topic)},
                   {"section_name", std::string(heading)},
                   {"fact_list", format_bullets(facts)}};
  return clean_section_text(gateway.chat(req), heading);
}

std::string write_lead(const ModelGateway& gateway, std::string_view topic,
                       const std::vector<std::string>& summaries, std::string_view lead_heading) {
  if (summaries.empty()) throw Error(ErrorCode::kPrecondition, "no summaries for the lead");
  ChatRequest req;
  req.template_id = TemplateId::kSectionWriter;
  req.variables = {{"topic", std::string(topic)},
                   {"section_name", std::string(lead_heading)},
                   {"fact_list", format_bullets(summaries)}};
  return clean_section_text(gateway.chat(req), lead_heading);
}

std::string refine_section(const ModelGateway& gateway, std::string_view topic, std::string_view heading,
                           std::string_view draft) {
  if (text::trim(draft).empty()) throw Error(ErrorCode::kPrecondition, "empty draft");
  ChatRequest req;
  req.template_id = TemplateId::kSectionRefiner;
  req.variables = {{"topic", std::string(topic)}, {"text", std::string(draft)}};
  std::string refined = clean_section_text(strip_field_prefix(gateway.chat(req), "Refined Text"), heading);
  if (refined.empty()) return std::string(draft);
  return refined;
}

std::vector<long long> parse_index_list(std::string_view completion) {
  std::string s = strip_field_prefix(completion, "Answer");
  const auto open = s.find('[');
  if (open != std::string::npos) {
    const auto close = s.find(']', open);
    if (close == std::string::npos) throw Error(ErrorCode::kParseFailure, "unterminated index list '" + s + "'");
    s = s.substr(open + 1, close - open - 1);
  }
  std::vector<long long> out;
  std::size_t i = 0;
  bool need_separator = false;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c) != 0) {
      ++i;
    } else if (c == ',') {
      need_separator = false;
      ++i;
    } else if (std::isdigit(c) != 0 || (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])) != 0)) {
      if (need_separator) throw Error(ErrorCode::kParseFailure, "indices must be comma separated: '" + s + "'");
      std::size_t used = 0;
      try {
        out.push_back(std::stoll(s.substr(i), &used));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParseFailure, "index out of range in '" + s + "'");
      }
      i += used;
      need_separator = true;
    } else {
      throw Error(ErrorCode::kParseFailure, "not an index list: '" + text::trim(completion) + "'");
    }
  }
  if (out.empty() && open == std::string::npos) {
    throw Error(ErrorCode::kParseFailure, "no indices in '" + text::trim(completion) + "'");
  }
  return out;
}

std::vector<std::string> find_citations(const ModelGateway& gateway, std::string_view sentence,
                                        const std::vector<MemoryUnit>& candidates) {
  if (candidates.empty()) return {};
  std::vector<std::string> texts;
  for (const auto& u : candidates) texts.push_back(u.text);
  ChatRequest req;
  req.template_id = TemplateId::kCitationFinder;
  req.variables = {{"claim", std::string(sentence)}, {"source_list", format_indexed(texts)}};
  std::vector<std::string> ids;
  std::set<long long> seen;
  for (long long idx : parse_index_list(gateway.chat(req))) {
    if (idx < 0 || idx >= static_cast<long long>(candidates.size())) continue;
    if (!seen.insert(idx).second) continue;
    ids.push_back(candidates[static_cast<std::size_t>(idx)].id);
  }
  return ids;
}

std::vector<Sentence> to_sentences(std::string_view prose) {
  const Segmentation seg = segment(prose);
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < seg.sentences.size(); ++i) {
    Sentence s;
    s.text = seg.sentences[i];
    s.starts_paragraph = i == 0 || std::count(seg.separators[i].begin(), seg.separators[i].end(), '\n') >= 2;
    out.push_back(std::move(s));
  }
  return out;
}

void number_references(Article& article, const std::map<std::string, std::string>& doc_urls) {
  article.references.clear();
  std::map<std::string, int> numbers;
  for (const Sentence* s : article.sentences()) {
    for (const auto& unit_id : s->citations) {
      auto src = article.unit_sources.find(unit_id);
      if (src == article.unit_sources.end()) {
        throw Error(ErrorCode::kUnknownUnit, "cited unit '" + unit_id + "' has no source");
      }
      if (numbers.contains(src->second)) continue;
      const int n = static_cast<int>(numbers.size()) + 1;
      numbers[src->second] = n;
      auto url = doc_urls.find(src->second);
      if (url == doc_urls.end()) {
        throw Error(ErrorCode::kPrecondition, "source document '" + src->second + "' has no URL");
      }
      article.references.push_back({n, src->second, url->second});
    }
  }
}

Article assemble_and_cite(const OutlineNode& outline, const MemoryStore& store, const ModelGateway& gateway,
                          const std::map<std::string, std::string>& doc_urls, const GenerationConfig& cfg,
                          GenerationStats* stats) {
  Article article;
  article.topic = store.topic();
  article.body = mirror(outline);
  for (const auto& u : store.units()) article.unit_sources[u.id] = u.source_doc_id;

  int parse_failures = 0;
  const auto leaf_nodes = leaves(outline);
  std::vector<std::future<SectionOutput>> jobs;
  for (const OutlineNode* leaf : leaf_nodes) {
    jobs.push_back(std::async(std::launch::async, generate_leaf, std::cref(*leaf), std::cref(article.topic),
                              std::cref(store), std::cref(gateway), std::cref(cfg)));
  }
  // Drain every job before rethrowing so no task outlives its references.
  std::optional<Error> first_error;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      SectionOutput out = jobs[i].get();
      parse_failures += out.parse_failures;
      find_section(article.body, leaf_nodes[i]->path)->sentences = std::move(out.sentences);
    } catch (const Error& e) {
      if (!first_error) first_error = e;
    }
  }
  if (first_error) throw *first_error;

  if (!outline.is_leaf() && !outline.cluster_summaries.empty()) {
    try {
      std::string prose = write_lead(gateway, article.topic, outline.cluster_summaries, cfg.lead_heading);
      if (cfg.refine && !text::trim(prose).empty()) {
        prose = refine_section(gateway, article.topic, cfg.lead_heading, prose);
      }
      article.lead = to_sentences(prose);
      if (cfg.cite && !article.lead.empty()) {
        const auto all = store.units();
        std::vector<std::string> texts;
        for (const auto& s : article.lead) texts.push_back(s.text);
        const auto embeddings = gateway.embed(texts);
        for (std::size_t i = 0; i < article.lead.size(); ++i) {
          std::vector<std::size_t> order(all.size());
          std::iota(order.begin(), order.end(), std::size_t{0});
          std::vector<double> score(all.size());
          for (std::size_t j = 0; j < all.size(); ++j) score[j] = cosine(embeddings[i], all[j].embedding);
          std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
          order.resize(std::min(order.size(), cfg.lead_candidates));
          std::vector<MemoryUnit> candidates;
          for (std::size_t j : order) candidates.push_back(all[j]);
          std::vector<Sentence> one{article.lead[i]};
          cite_sentences(gateway, one, candidates, parse_failures);
          article.lead[i].citations = std::move(one.front().citations);
        }
      }
    } catch (const Error& e) {
      throw e.with_context("lead");
    }
  }

  number_references(article, doc_urls);

  if (stats != nullptr) {
    stats->sections_written = static_cast<int>(leaf_nodes.size()) + (article.lead.empty() ? 0 : 1);
    stats->citation_parse_failures = parse_failures;
    for (const Sentence* s : article.sentences()) {
      ++stats->sentences;
      if (!s->citations.empty()) ++stats->cited_sentences;
    }
  }
  return article;
}

}  // namespace mog
