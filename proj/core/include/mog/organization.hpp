#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mog/kmeans.hpp"
#include "mog/memory_store.hpp"
#include "mog/model_gateway.hpp"

namespace mog {

// One section of the outline. Units live only at leaves; internal nodes carry
// a heading and the cluster summaries that produced their children.
struct OutlineNode {
  std::string heading;
  std::string path;  // store label: "Topic/History/Origins"
  int depth = 0;
  std::vector<OutlineNode> children;
  std::vector<std::string> assigned_unit_ids;
  std::vector<std::string> cluster_summaries;

  bool is_leaf() const noexcept { return children.empty(); }
};

struct ClusterSet {
  std::vector<std::vector<std::string>> clusters;  // unit ids
  std::vector<Embedding> centroids;
};

struct OrganizeConfig {
  std::uint64_t seed = 0;
  std::optional<std::size_t> k;  // fixed k; otherwise clamp(round(sqrt(n/2)), min_k, max_k)
  std::size_t min_k = 2;
  std::size_t max_k = 8;
  std::size_t recursion_threshold = 12;
  int max_outline_depth = 3;
  bool single_level = false;  // one heading pass at the root, no recursion
  KMeansOptions kmeans;

  void validate() const;  // Error(kInvalidConfig)
};

std::size_t choose_k(std::size_t n, const OrganizeConfig& cfg);

ClusterSet cluster_kmeans(const std::vector<MemoryUnit>& units, std::size_t k, std::uint64_t seed,
                          const KMeansOptions& options = {});

// summarizer over a bullet list of facts.
std::string summarize_facts(const ModelGateway& gateway, std::string_view topic,
                            const std::vector<std::string>& facts);

// Single-unit clusters short-circuit to the unit text. Empty → kPrecondition.
std::string summarize_cluster(const ModelGateway& gateway, std::string_view topic,
                              const std::vector<MemoryUnit>& cluster);

// Outliner → OutlineRewriter → OutlineRefiner. Headings equal to the parent or
// to any entry of `prior` (the ancestor headings) are discarded, as are
// duplicates. Throws Error(kParseFailure) if nothing usable remains.
std::vector<std::string> propose_headings(const ModelGateway& gateway, std::string_view parent_heading,
                                          const std::vector<std::string>& summaries,
                                          const std::vector<std::string>& prior = {});

// One heading per line (a JSON string list is accepted too); list markers are
// stripped, '/' becomes '-' so headings stay valid path segments, and
// case-insensitive duplicates are dropped.
std::vector<std::string> parse_headings(std::string_view completion);

// Index of the heading embedding with the highest cosine similarity to
// `unit`; ties go to the lowest index.
std::size_t assign_unit(std::span<const double> unit, const std::vector<Embedding>& heading_embeddings);
std::size_t assign_unit(const MemoryUnit& unit, const std::vector<std::string>& headings,
                        const std::vector<Embedding>& heading_embeddings);

// The text embedded for a heading when assigning units to it.
std::string heading_probe(std::string_view topic, std::string_view heading);

// Builds the outline and relabels every unit in `store` with its leaf path.
OutlineNode organize(MemoryStore& store, const ModelGateway& gateway, const OrganizeConfig& cfg);

std::vector<const OutlineNode*> leaves(const OutlineNode& root);
std::size_t count_nodes(const OutlineNode& root);  // excluding root

// Human-readable violations of the outline invariants against `store`
// (partition, leaf/children exclusivity, sibling uniqueness, depth cap,
// labels matching leaf paths). Empty means valid.
std::vector<std::string> check_outline(const OutlineNode& root, const MemoryStore& store,
                                       int max_outline_depth);

std::string dump_outline(const OutlineNode& root, const MemoryStore* store_for_units = nullptr);

nlohmann::json outline_to_json(const OutlineNode& node);
OutlineNode outline_from_json(const nlohmann::json& json);

}  // namespace mog
