#include "mog/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <regex>

#include "mog/error.hpp"
#include "mog/organization.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

bool is_heading(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '#') ++n;
  return n > 0 && n < line.size() && line[n] == ' ';
}

// Whole-word containment on lowercase text.
bool contains_word(const std::string& hay, const std::string& needle) {
  if (needle.empty()) return false;
  auto is_word = [](unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; };
  std::size_t pos = hay.find(needle);
  while (pos != std::string::npos) {
    const bool left = pos == 0 || !is_word(static_cast<unsigned char>(hay[pos - 1])) ||
                      !is_word(static_cast<unsigned char>(needle.front()));
    const std::size_t end = pos + needle.size();
    const bool right = end == hay.size() || !is_word(static_cast<unsigned char>(hay[end])) ||
                       !is_word(static_cast<unsigned char>(needle.back()));
    if (left && right) return true;
    pos = hay.find(needle, pos + 1);
  }
  return false;
}

double percent(std::size_t num, std::size_t den) {
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string strip_citation_groups(std::string_view s) {
  static const std::regex kGroup(R"(\[\d+(?:,\s*\d+)*\])");
  return std::regex_replace(std::string(s), kGroup, "");
}

std::string article_prose(std::string_view rendered) {
  std::vector<std::string> paragraphs;
  std::string current;
  bool in_references = false;
  auto flush = [&] {
    if (!current.empty()) paragraphs.push_back(strip_citation_groups(current));
    current.clear();
  };
  for (const auto& line : text::split_lines(rendered)) {
    if (is_heading(line)) {
      flush();
      in_references = line == "# References";
      continue;
    }
    if (in_references) continue;
    if (text::trim(line).empty()) {
      flush();
    } else {
      if (!current.empty()) current.push_back('\n');
      current += line;
    }
  }
  flush();
  return text::join(paragraphs, "\n\n");
}

Informativeness informativeness(std::string_view rendered, const Recognizer& recognizer) {
  Informativeness info;
  for (const auto& line : text::split_lines(rendered)) {
    if (!is_heading(line) || line == "# References") continue;
    ++info.section_count_total;
    if (line.rfind("# ", 0) == 0) ++info.section_count_first_level;
  }
  const std::string prose = article_prose(rendered);
  std::size_t i = 0;
  while (i < prose.size()) {
    while (i < prose.size() && std::isspace(static_cast<unsigned char>(prose[i])) != 0) ++i;
    if (i >= prose.size()) break;
    ++info.word_count;
    while (i < prose.size() && std::isspace(static_cast<unsigned char>(prose[i])) == 0) ++i;
  }
  info.entity_count = static_cast<int>(recognizer.entities(prose).size());
  info.numerical_count = static_cast<int>(recognizer.numerals(prose).size());
  return info;
}

std::optional<bool> parse_judgment(std::string_view completion) {
  std::string s = text::to_lower(strip_field_prefix(completion, "Answer"));
  std::size_t i = 0;
  while (i < s.size() && (s[i] == '"' || s[i] == '\'' || s[i] == '*' || s[i] == '`')) ++i;
  auto starts = [&](std::string_view word) {
    if (s.compare(i, word.size(), word) != 0) return false;
    const std::size_t end = i + word.size();
    return end == s.size() || std::isalpha(static_cast<unsigned char>(s[end])) == 0;
  };
  if (starts("yes")) return true;
  if (starts("no")) return false;
  return std::nullopt;
}

CitationMetrics citation_metrics(const Sidecar& sidecar, const ModelGateway& gateway) {
  CitationMetrics m;
  for (const auto& s : sidecar.sentences) {
    SentenceJudgment j{s.section, s.text, s.citations, std::nullopt, {}, 0};
    ++m.sentences;
    if (!s.citations.empty()) {
      ++m.cited_sentences;
      std::vector<std::string> sources;
      for (const auto& id : s.citations) {
        auto it = sidecar.units.find(id);
        if (it == sidecar.units.end()) throw Error(ErrorCode::kPrecondition, "citation '" + id + "' does not resolve");
        sources.push_back(it->second.text);
      }
      ChatRequest full;
      full.template_id = TemplateId::kEntailer;
      full.variables = {{"source", text::join(sources, "\n")}, {"claim", s.text}};
      const auto verdict = parse_judgment(gateway.chat(full));
      if (!verdict) ++j.unparseable;
      j.fully_supported = verdict.value_or(false);
      if (*j.fully_supported) ++m.supported_sentences;

      for (const auto& source : sources) {
        ChatRequest part;
        part.template_id = TemplateId::kPartialEntailer;
        part.variables = {{"source", source}, {"claim", s.text}};
        const auto v = parse_judgment(gateway.chat(part));
        if (!v) ++j.unparseable;
        j.partially_supported.push_back(v.value_or(false));
        ++m.pairs;
        if (v.value_or(false)) ++m.supported_pairs;
      }
    }
    m.unparseable_judgments += j.unparseable;
    m.per_sentence.push_back(std::move(j));
  }
  m.rate = m.sentences == 0 ? 0.0 : percent(static_cast<std::size_t>(m.cited_sentences), static_cast<std::size_t>(m.sentences));
  if (m.cited_sentences > 0) {
    m.recall = percent(static_cast<std::size_t>(m.supported_sentences), static_cast<std::size_t>(m.cited_sentences));
  }
  if (m.pairs > 0) m.precision = percent(static_cast<std::size_t>(m.supported_pairs), static_cast<std::size_t>(m.pairs));
  return m;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeRecall rouge_recall(std::string_view candidate, std::string_view reference) {
  const auto ref = text::tokenize(reference);
  if (ref.empty()) throw Error(ErrorCode::kEmptyReference, "reference has no tokens");
  const auto cand = text::tokenize(candidate);
  std::map<std::string, std::size_t> available;
  for (const auto& t : cand) ++available[t];
  std::size_t matched = 0;
  for (const auto& t : ref) {
    auto it = available.find(t);
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return {percent(matched, ref.size()), percent(lcs_length(cand, ref), ref.size())};
}

double entity_recall(std::string_view candidate, const std::vector<std::string>& reference_mentions) {
  std::set<std::string> wanted;
  for (const auto& m : reference_mentions) {
    std::string n = normalize_entity(m);
    if (!n.empty()) wanted.insert(std::move(n));
  }
  if (wanted.empty()) throw Error(ErrorCode::kEmptyReference, "reference has no entity mentions");
  const std::string hay = text::to_lower(text::normalize_whitespace(candidate));
  std::size_t hit = 0;
  for (const auto& w : wanted) hit += contains_word(hay, w) ? 1 : 0;
  return percent(hit, wanted.size());
}

double numerical_recall(std::string_view candidate, const std::vector<std::string>& reference_mentions,
                        const Recognizer& recognizer) {
  std::map<std::string, std::string> wanted;  // normalized -> lowercase surface
  for (const auto& m : reference_mentions) {
    std::string n = normalize_numeral(m);
    if (!n.empty()) wanted.emplace(std::move(n), text::to_lower(text::normalize_whitespace(m)));
  }
  if (wanted.empty()) throw Error(ErrorCode::kEmptyReference, "reference has no numerals");
  std::set<std::string> found;
  for (const auto& m : recognizer.numerals(candidate)) found.insert(m.normalized);
  const std::string hay = text::to_lower(text::normalize_whitespace(candidate));
  std::size_t hit = 0;
  for (const auto& [norm, surface] : wanted) hit += (found.contains(norm) || contains_word(hay, surface)) ? 1 : 0;
  return percent(hit, wanted.size());
}

Utilization utilization(const std::set<std::string>& collected, const std::set<std::string>& cited) {
  for (const auto& c : cited) {
    if (!collected.contains(c)) {
      throw Error(ErrorCode::kPrecondition, "cited source '" + c + "' is not among the collected pages");
    }
  }
  Utilization u;
  u.collected = static_cast<int>(collected.size());
  u.cited = static_cast<int>(cited.size());
  if (!collected.empty()) u.rate = percent(cited.size(), collected.size());
  return u;
}

Utilization utilization(const Sidecar& sidecar) {
  std::set<std::string> collected(sidecar.collected_sources.begin(), sidecar.collected_sources.end());
  std::set<std::string> cited;
  for (const auto& r : sidecar.references) cited.insert(r.source_doc_id);
  return utilization(collected, cited);
}

std::optional<double> macro_average(const std::vector<std::optional<double>>& rates) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rates) {
    if (!r) continue;
    sum += *r;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double heading_assignment_precision(const std::vector<HeadingCase>& cases, const ModelGateway& gateway) {
  if (cases.empty()) throw Error(ErrorCode::kPrecondition, "no heading cases");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto gold = std::find(c.headings.begin(), c.headings.end(), c.gold);
    if (c.headings.size() < 2 || gold == c.headings.end()) {
      throw Error(ErrorCode::kPrecondition,
                  "case " + std::to_string(i) + " needs at least two headings including the gold one");
    }
    const auto sentence = gateway.embed_one(c.sentence);
    const auto headings = gateway.embed(c.headings);
    const std::size_t pick = assign_unit(std::span<const double>(sentence), headings);
    if (pick == static_cast<std::size_t>(gold - c.headings.begin())) ++correct;
  }
  return percent(correct, cases.size());
}

nlohmann::json eval_report_to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json per_sentence = nlohmann::json::array();
  for (const auto& s : r.citation.per_sentence) {
    per_sentence.push_back({{"section", s.section},
                            {"sentence", s.text},
                            {"citations", s.citations},
                            {"fully_supported", s.fully_supported ? nlohmann::json(*s.fully_supported) : nlohmann::json(nullptr)},
                            {"partially_supported", s.partially_supported},
                            {"unparseable_judgments", s.unparseable}});
  }
  nlohmann::json j = {
      {"section_count_total", r.info.section_count_total},
      {"section_count_first_level", r.info.section_count_first_level},
      {"word_count", r.info.word_count},
      {"entity_count", r.info.entity_count},
      {"numerical_count", r.info.numerical_count},
      {"citation_rate", r.citation.rate},
      {"citation_recall", opt(r.citation.recall)},
      {"citation_precision", opt(r.citation.precision)},
      {"sentences", r.citation.sentences},
      {"cited_sentences", r.citation.cited_sentences},
      {"citation_pairs", r.citation.pairs},
      {"unparseable_judgments", r.citation.unparseable_judgments},
      {"pages_collected", r.utilization.collected},
      {"pages_cited", r.utilization.cited},
      {"utilization_rate", opt(r.utilization.rate)},
  };
  if (r.has_reference) {
    j["rouge1_recall"] = opt(r.rouge1_recall);
    j["rougeL_recall"] = opt(r.rougeL_recall);
    j["entity_recall"] = opt(r.entity_recall);
    j["numerical_recall"] = opt(r.numerical_recall);
  }
  j["notes"] = r.notes;
  j["per_sentence"] = std::move(per_sentence);
  return j;
}

}  // namespace mog
