#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mog/memory_store.hpp"
#include "mog/model_gateway.hpp"
#include "mog/organization.hpp"

namespace mog {

struct Sentence {
  std::string text;
  std::vector<std::string> citations;  // unit ids
  std::optional<bool> supported;
  bool starts_paragraph = false;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Mirrors an OutlineNode; only leaves carry prose.
struct Section {
  std::string heading;
  std::string path;
  int depth = 0;
  std::vector<Sentence> sentences;
  std::vector<Section> children;

  friend bool operator==(const Section&, const Section&) = default;
};

struct Reference {
  int number = 0;
  std::string source_doc_id;
  std::string url;

  friend bool operator==(const Reference&, const Reference&) = default;
};

struct Article {
  std::string topic;
  std::vector<Sentence> lead;
  Section body;  // root: heading = topic, depth 0, rendered without a heading
  std::vector<Reference> references;
  std::map<std::string, std::string> unit_sources;  // unit id -> source doc id

  // Lead first, then body sections in document order.
  std::vector<const Sentence*> sentences() const;
  std::optional<int> reference_number(const std::string& unit_id) const;

  friend bool operator==(const Article&, const Article&) = default;
};

struct GenerationConfig {
  bool cite = true;
  bool refine = true;
  std::size_t lead_candidates = 10;  // units offered to the citation finder per lead sentence
  std::string lead_heading = "Lead";
};

struct GenerationStats {
  int sections_written = 0;
  int sentences = 0;
  int cited_sentences = 0;
  int citation_parse_failures = 0;
};

std::string write_section(const ModelGateway& gateway, std::string_view topic, std::string_view heading,
                          const std::vector<MemoryUnit>& units);

// section_writer with `lead_heading` and the summaries as facts.
std::string write_lead(const ModelGateway& gateway, std::string_view topic,
                       const std::vector<std::string>& summaries, std::string_view lead_heading = "Lead");

// Keeps the draft when the refiner returns nothing.
std::string refine_section(const ModelGateway& gateway, std::string_view topic, std::string_view heading,
                           std::string_view draft);

// Removes an echoed output-field prefix and a leading line that repeats the
// heading (optionally with '#' markers).
std::string clean_section_text(std::string_view completion, std::string_view heading);

// 0-based indices from a completion such as "[0, 2]" or "0,2". Throws
// Error(kParseFailure) for anything else.
std::vector<long long> parse_index_list(std::string_view completion);

// Ids of the chosen candidates in index order; out-of-range indices and
// repeats are dropped. Parse failures propagate as Error(kParseFailure).
std::vector<std::string> find_citations(const ModelGateway& gateway, std::string_view sentence,
                                        const std::vector<MemoryUnit>& candidates);

std::vector<Sentence> to_sentences(std::string_view prose);

// Numbers source documents densely from 1 in order of first citation while
// walking sentences in document order. `doc_urls` maps doc id -> URL.
void number_references(Article& article, const std::map<std::string, std::string>& doc_urls);

Article assemble_and_cite(const OutlineNode& outline, const MemoryStore& store, const ModelGateway& gateway,
                          const std::map<std::string, std::string>& doc_urls, const GenerationConfig& cfg = {},
                          GenerationStats* stats = nullptr);

}  // namespace mog
