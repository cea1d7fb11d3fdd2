#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mog/generation.hpp"
#include "mog/memory_store.hpp"

namespace mog {

// Lead paragraphs without a heading, then "#"×depth headings with their
// prose, each sentence followed directly by its "[n1,n2]" group, and a
// closing "# References" block of "[n] url" lines.
std::string render(const Article& article);

// Inverse of render() for the layout above. Citations become synthetic unit
// ids "ref-<n>" pointing at synthetic sources "src-<n>", so that
// render(parse_rendered(x)) == x for any rendered article x.
Article parse_rendered(std::string_view rendered, std::string topic = {});

// The evaluator's view of a generated article: each sentence with its section
// path and cited unit ids, the cited units' texts and sources, the reference
// list, and the source documents that contributed memory units.
struct SidecarSentence {
  std::string section;  // "" for the lead
  std::string text;
  std::vector<std::string> citations;
  bool starts_paragraph = false;
};

struct SidecarUnit {
  std::string text;
  std::string source;
};

struct Sidecar {
  std::string topic;
  std::vector<SidecarSentence> sentences;
  std::map<std::string, SidecarUnit> units;
  std::vector<Reference> references;
  std::vector<std::string> collected_sources;
};

Sidecar make_sidecar(const Article& article, const MemoryStore& store,
                     const std::vector<std::string>& collected_sources);

nlohmann::json sidecar_to_json(const Sidecar& sidecar);

// Validates structure and cross-references; Error(kParseFailure) names the
// offending record, e.g. "sentences[3].citations[0]".
Sidecar sidecar_from_json(const nlohmann::json& json);

}  // namespace mog
