#include "mog/article_io.hpp"

#include <regex>
#include <set>

#include "mog/error.hpp"
#include "mog/segmenter.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

std::string citation_group(const Article& article, const Sentence& s) {
  if (s.citations.empty()) return {};
  std::set<int> numbers;
  for (const auto& id : s.citations) {
    const auto n = article.reference_number(id);
    if (!n) throw Error(ErrorCode::kPrecondition, "cited unit '" + id + "' has no reference number");
    numbers.insert(*n);
  }
  std::string out = "[";
  for (int n : numbers) {
    if (out.size() > 1) out.push_back(',');
    out += std::to_string(n);
  }
  out.push_back(']');
  return out;
}

std::string prose(const Article& article, const std::vector<Sentence>& sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += sentences[i].starts_paragraph ? "\n\n" : " ";
    out += text::trim(sentences[i].text);
    out += citation_group(article, sentences[i]);
  }
  return out;
}

void render_section(const Article& article, const Section& s, std::vector<std::string>& blocks) {
  blocks.push_back(std::string(static_cast<std::size_t>(s.depth), '#') + " " + s.heading);
  if (!s.sentences.empty()) blocks.push_back(prose(article, s.sentences));
  for (const auto& c : s.children) render_section(article, c, blocks);
}

bool heading_line(const std::string& line, int& depth, std::string& heading) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '#') ++n;
  if (n == 0 || n >= line.size() || line[n] != ' ') return false;
  depth = static_cast<int>(n);
  heading = line.substr(n + 1);
  return true;
}

// Splits a rendered paragraph into sentences, peeling citation groups off
// the sentence they follow.
std::vector<Sentence> parse_paragraph(const std::string& para, Article& article) {
  static const std::regex kGroup(R"(\[(\d+(?:,\d+)*)\](?=\s|$))");
  std::vector<Sentence> out;
  std::size_t pos = 0;
  auto add_chunk = [&](std::string_view chunk, const std::string& numbers) {
    auto parts = segment_sentences(chunk);
    if (parts.empty()) {
      if (numbers.empty()) return;
      parts.emplace_back();  // group with no text in front of it
    }
    for (auto& p : parts) out.push_back({std::move(p), {}, std::nullopt, false});
    std::size_t start = 0;
    while (start < numbers.size()) {
      std::size_t comma = numbers.find(',', start);
      if (comma == std::string::npos) comma = numbers.size();
      const std::string n = numbers.substr(start, comma - start);
      const std::string unit_id = "ref-" + n;
      out.back().citations.push_back(unit_id);
      article.unit_sources[unit_id] = "src-" + n;
      start = comma + 1;
    }
  };
  for (auto it = std::sregex_iterator(para.begin(), para.end(), kGroup); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    add_chunk(std::string_view(para).substr(pos, static_cast<std::size_t>(m.position()) - pos), m[1].str());
    pos = static_cast<std::size_t>(m.position() + m.length());
  }
  add_chunk(std::string_view(para).substr(pos), {});
  if (!out.empty()) out.front().starts_paragraph = true;
  return out;
}

template <class F>
auto field(const nlohmann::json& j, const std::string& where, F&& read) {
  try {
    return read(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseFailure, "sidecar " + where + ": " + e.what());
  }
}

}  // namespace

std::string render(const Article& article) {
  std::vector<std::string> blocks;
  if (!article.lead.empty()) blocks.push_back(prose(article, article.lead));
  if (article.body.children.empty()) {
    if (!article.body.sentences.empty()) blocks.push_back(prose(article, article.body.sentences));
  } else {
    for (const auto& c : article.body.children) render_section(article, c, blocks);
  }
  std::string refs = "# References";
  std::vector<Reference> sorted = article.references;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.number < b.number; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    refs += (i == 0 ? "\n\n" : "\n");
    refs += "[" + std::to_string(sorted[i].number) + "] " + sorted[i].url;
  }
  blocks.push_back(std::move(refs));
  return text::join(blocks, "\n\n") + "\n";
}

Article parse_rendered(std::string_view rendered, std::string topic) {
  Article article;
  article.topic = topic;
  article.body.heading = topic;
  article.body.path = topic;
  article.body.depth = 0;

  const auto lines = text::split_lines(rendered);
  // References start at the last "# References" heading.
  std::size_t refs_at = lines.size();
  for (std::size_t i = lines.size(); i-- > 0;) {
    if (lines[i] == "# References") {
      refs_at = i;
      break;
    }
  }

  std::vector<Section*> stack{&article.body};
  std::vector<Sentence>* target = &article.lead;
  std::string paragraph;
  auto flush = [&] {
    if (paragraph.empty()) return;
    for (auto& s : parse_paragraph(paragraph, article)) target->push_back(std::move(s));
    paragraph.clear();
  };
  for (std::size_t i = 0; i < refs_at; ++i) {
    const std::string& line = lines[i];
    int depth = 0;
    std::string heading;
    if (heading_line(line, depth, heading)) {
      flush();
      while (stack.size() > 1 && stack.back()->depth >= depth) stack.pop_back();
      Section* parent = stack.back();
      if (depth != parent->depth + 1) {
        throw Error(ErrorCode::kParseFailure,
                    "line " + std::to_string(i + 1) + ": heading level " + std::to_string(depth) +
                        " skips a level");
      }
      parent->children.push_back({heading, parent->path + "/" + heading, depth, {}, {}});
      stack.push_back(&parent->children.back());
      target = &stack.back()->sentences;
    } else if (text::trim(line).empty()) {
      flush();
    } else {
      if (!paragraph.empty()) paragraph.push_back('\n');
      paragraph += line;
    }
  }
  flush();

  static const std::regex kRef(R"(\[(\d+)\] (.+))");
  for (std::size_t i = refs_at + 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    std::smatch m;
    if (!std::regex_match(lines[i], m, kRef)) {
      throw Error(ErrorCode::kParseFailure, "line " + std::to_string(i + 1) + ": malformed reference");
    }
    article.references.push_back({std::stoi(m[1].str()), "src-" + m[1].str(), m[2].str()});
  }
  return article;
}

Sidecar make_sidecar(const Article& article, const MemoryStore& store,
                     const std::vector<std::string>& collected_sources) {
  Sidecar sc;
  sc.topic = article.topic;
  sc.references = article.references;
  sc.collected_sources = collected_sources;
  auto add = [&](const std::string& section, const Sentence& s) {
    sc.sentences.push_back({section, s.text, s.citations, s.starts_paragraph});
    for (const auto& id : s.citations) {
      if (sc.units.contains(id)) continue;
      const auto unit = store.find(id);
      if (!unit) throw Error(ErrorCode::kUnknownUnit, "cited unit '" + id + "' is not in the store");
      sc.units[id] = {unit->text, unit->source_doc_id};
    }
  };
  for (const auto& s : article.lead) add("", s);
  std::vector<const Section*> todo{&article.body};
  while (!todo.empty()) {
    const Section* sec = todo.back();
    todo.pop_back();
    for (const auto& s : sec->sentences) add(sec->path, s);
    for (auto it = sec->children.rbegin(); it != sec->children.rend(); ++it) todo.push_back(&*it);
  }
  return sc;
}

nlohmann::json sidecar_to_json(const Sidecar& sc) {
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : sc.sentences) {
    sentences.push_back({{"section", s.section},
                         {"text", s.text},
                         {"citations", s.citations},
                         {"starts_paragraph", s.starts_paragraph}});
  }
  nlohmann::json units = nlohmann::json::object();
  for (const auto& [id, u] : sc.units) units[id] = {{"text", u.text}, {"source", u.source}};
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& r : sc.references) refs.push_back({{"number", r.number}, {"source", r.source_doc_id}, {"url", r.url}});
  return {{"format", "mog-article-sidecar"},
          {"version", 1},
          {"topic", sc.topic},
          {"sentences", std::move(sentences)},
          {"units", std::move(units)},
          {"references", std::move(refs)},
          {"collected_sources", sc.collected_sources}};
}

Sidecar sidecar_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseFailure, "sidecar: top level must be an object");
  if (j.value("format", std::string()) != "mog-article-sidecar") {
    throw Error(ErrorCode::kParseFailure, "sidecar: missing or unknown 'format'");
  }
  Sidecar sc;
  sc.topic = field(j, "topic", [](const auto& x) { return x.at("topic").template get<std::string>(); });

  const auto& units = field(j, "units", [](const auto& x) -> const nlohmann::json& { return x.at("units"); });
  if (!units.is_object()) throw Error(ErrorCode::kParseFailure, "sidecar units: must be an object");
  for (const auto& [id, u] : units.items()) {
    const std::string where = "units[\"" + id + "\"]";
    sc.units[id] = field(u, where, [](const auto& x) {
      return SidecarUnit{x.at("text").template get<std::string>(), x.at("source").template get<std::string>()};
    });
    if (text::trim(sc.units[id].text).empty()) throw Error(ErrorCode::kParseFailure, "sidecar " + where + ": empty text");
  }

  const auto& sentences =
      field(j, "sentences", [](const auto& x) -> const nlohmann::json& { return x.at("sentences"); });
  if (!sentences.is_array()) throw Error(ErrorCode::kParseFailure, "sidecar sentences: must be an array");
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::string where = "sentences[" + std::to_string(i) + "]";
    SidecarSentence s = field(sentences[i], where, [](const auto& x) {
      return SidecarSentence{x.value("section", std::string()), x.at("text").template get<std::string>(),
                             x.at("citations").template get<std::vector<std::string>>(),
                             x.value("starts_paragraph", false)};
    });
    for (std::size_t c = 0; c < s.citations.size(); ++c) {
      if (!sc.units.contains(s.citations[c])) {
        throw Error(ErrorCode::kParseFailure, "sidecar " + where + ".citations[" + std::to_string(c) +
                                                  "]: unknown unit '" + s.citations[c] + "'");
      }
    }
    sc.sentences.push_back(std::move(s));
  }

  const auto& refs = field(j, "references", [](const auto& x) -> const nlohmann::json& { return x.at("references"); });
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::string where = "references[" + std::to_string(i) + "]";
    sc.references.push_back(field(refs[i], where, [](const auto& x) {
      return Reference{x.at("number").template get<int>(), x.at("source").template get<std::string>(),
                       x.at("url").template get<std::string>()};
    }));
  }
  sc.collected_sources = field(j, "collected_sources", [](const auto& x) {
    return x.at("collected_sources").template get<std::vector<std::string>>();
  });
  return sc;
}

}  // namespace mog
