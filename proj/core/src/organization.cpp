#include "mog/organization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mog/error.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

std::string heading_key(std::string_view h) { return text::to_lower(text::normalize_whitespace(h)); }

struct Organizer {
  MemoryStore& store;
  const ModelGateway& gateway;
  const OrganizeConfig& cfg;

  bool should_split(std::size_t n, int depth) const {
    if (n == 0 || depth >= cfg.max_outline_depth) return false;
    if (cfg.single_level) return depth == 0;
    return n >= cfg.recursion_threshold && n >= 2;
  }

  OutlineNode build(std::vector<MemoryUnit> units, const std::string& heading, const std::string& path,
                    int depth, std::vector<std::string> ancestors) {
    OutlineNode node;
    node.heading = heading;
    node.path = path;
    node.depth = depth;
    auto make_leaf = [&] {
      for (const auto& u : units) node.assigned_unit_ids.push_back(u.id);
    };
    if (!should_split(units.size(), depth)) {
      make_leaf();
      return node;
    }

    std::vector<std::string> headings;
    std::vector<std::vector<MemoryUnit>> groups;
    try {
      const std::size_t k = std::min(choose_k(units.size(), cfg), units.size());
      const ClusterSet clusters =
          cluster_kmeans(units, k, text::fnv1a64(path, cfg.seed), cfg.kmeans);
      std::map<std::string, const MemoryUnit*> by_id;
      for (const auto& u : units) by_id[u.id] = &u;
      for (const auto& ids : clusters.clusters) {
        std::vector<MemoryUnit> members;
        for (const auto& id : ids) members.push_back(*by_id.at(id));
        node.cluster_summaries.push_back(summarize_cluster(gateway, store.topic(), members));
      }
      ancestors.push_back(heading);
      headings = propose_headings(gateway, heading, node.cluster_summaries, ancestors);
      std::vector<std::string> probes;
      for (const auto& h : headings) probes.push_back(heading_probe(store.topic(), h));
      const std::vector<Embedding> heading_embeddings = gateway.embed(probes);
      groups.resize(headings.size());
      for (const auto& u : units) groups[assign_unit(u, headings, heading_embeddings)].push_back(u);
    } catch (const Error& e) {
      throw e.with_context("organizing '" + path + "'");
    }

    // Headings that attracted no unit are dropped.
    std::vector<std::string> kept_headings;
    std::vector<std::vector<MemoryUnit>> kept_groups;
    for (std::size_t i = 0; i < headings.size(); ++i) {
      if (groups[i].empty()) continue;
      kept_headings.push_back(headings[i]);
      kept_groups.push_back(std::move(groups[i]));
    }
    // A non-root split that collapses into one heading adds no structure.
    if (kept_groups.size() == 1 && depth > 0) {
      make_leaf();
      return node;
    }
    for (std::size_t i = 0; i < kept_groups.size(); ++i) {
      const std::string child_path = path + "/" + kept_headings[i];
      for (auto& u : kept_groups[i]) {
        store.relabel(u.id, child_path);
        u.label = child_path;
      }
      node.children.push_back(
          build(std::move(kept_groups[i]), kept_headings[i], child_path, depth + 1, ancestors));
    }
    return node;
  }
};

void collect_leaves(const OutlineNode& node, std::vector<const OutlineNode*>& out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

void check_node(const OutlineNode& node, int max_depth, std::vector<std::string>& problems) {
  const std::string where = "'" + node.path + "': ";
  if (node.depth > max_depth) problems.push_back(where + "depth exceeds cap");
  if (!node.children.empty() && !node.assigned_unit_ids.empty()) {
    problems.push_back(where + "internal node holds units");
  }
  std::set<std::string> seen;
  for (const auto& c : node.children) {
    if (c.depth != node.depth + 1) problems.push_back(where + "child depth is not parent depth + 1");
    if (!seen.insert(heading_key(c.heading)).second) {
      problems.push_back(where + "duplicate sibling heading '" + c.heading + "'");
    }
    if (c.heading.empty()) problems.push_back(where + "empty heading");
    check_node(c, max_depth, problems);
  }
}

void dump_node(const OutlineNode& node, const MemoryStore* store, std::string& out) {
  out += std::string(static_cast<std::size_t>(node.depth) * 2, ' ');
  out += node.heading;
  if (node.is_leaf()) out += " (" + std::to_string(node.assigned_unit_ids.size()) + ")";
  out += '\n';
  if (store != nullptr) {
    for (const auto& id : node.assigned_unit_ids) {
      const auto unit = store->find(id);
      out += std::string(static_cast<std::size_t>(node.depth) * 2 + 2, ' ');
      out += "- " + id + ": " + (unit ? unit->text : std::string("<missing>")) + '\n';
    }
  }
  for (const auto& c : node.children) dump_node(c, store, out);
}

}  // namespace

void OrganizeConfig::validate() const {
  if (k && *k == 0) throw Error(ErrorCode::kInvalidConfig, "organization.k must be positive");
  if (min_k == 0 || min_k > max_k) {
    throw Error(ErrorCode::kInvalidConfig, "organization.min_k must be in [1, max_k]");
  }
  if (recursion_threshold < 2) {
    throw Error(ErrorCode::kInvalidConfig, "organization.recursion_threshold must be at least 2");
  }
  if (max_outline_depth < 0) {
    throw Error(ErrorCode::kInvalidConfig, "organization.max_outline_depth must be non-negative");
  }
  if (kmeans.restarts < 1 || kmeans.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidConfig, "k-means restarts and iterations must be positive");
  }
}

std::size_t choose_k(std::size_t n, const OrganizeConfig& cfg) {
  if (cfg.k) return *cfg.k;
  const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n) / 2.0)));
  return std::clamp(k, cfg.min_k, cfg.max_k);
}

ClusterSet cluster_kmeans(const std::vector<MemoryUnit>& units, std::size_t k, std::uint64_t seed,
                          const KMeansOptions& options) {
  if (k > units.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds " + std::to_string(units.size()) + " units");
  }
  std::vector<Embedding> points;
  points.reserve(units.size());
  for (const auto& u : units) points.push_back(u.embedding);
  KMeansResult r = kmeans(points, k, seed, options);
  ClusterSet set;
  set.centroids = std::move(r.centroids);
  for (const auto& cluster : r.clusters) {
    std::vector<std::string> ids;
    for (std::size_t i : cluster) ids.push_back(units[i].id);
    set.clusters.push_back(std::move(ids));
  }
  return set;
}

std::string summarize_facts(const ModelGateway& gateway, std::string_view topic,
                            const std::vector<std::string>& facts) {
  ChatRequest req;
  req.template_id = TemplateId::kSummarizer;
  req.variables = {{"topic", std::string(topic)}, {"fact_list", format_bullets(facts)}};
  return strip_field_prefix(gateway.chat(req), "Summary");
}

std::string summarize_cluster(const ModelGateway& gateway, std::string_view topic,
                              const std::vector<MemoryUnit>& cluster) {
  if (cluster.empty()) throw Error(ErrorCode::kPrecondition, "cannot summarize an empty cluster");
  if (cluster.size() == 1) return cluster.front().text;
  std::vector<std::string> facts;
  for (const auto& u : cluster) facts.push_back(u.text);
  return summarize_facts(gateway, topic, facts);
}

std::vector<std::string> parse_headings(std::string_view completion) {
  std::vector<std::string> raw;
  const std::string trimmed = text::trim(completion);
  bool parsed_json = false;
  if (!trimmed.empty() && trimmed.front() == '[') {
    const auto json = nlohmann::json::parse(trimmed, nullptr, false);
    if (json.is_array() && std::all_of(json.begin(), json.end(), [](const auto& j) { return j.is_string(); })) {
      for (const auto& j : json) raw.push_back(j.template get<std::string>());
      parsed_json = true;
    }
  }
  if (!parsed_json) raw = text::split_lines(trimmed);

  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& line : raw) {
    std::string h = text::normalize_whitespace(text::strip_list_marker(line));
    std::replace(h.begin(), h.end(), '/', '-');
    if (h.empty()) continue;
    if (seen.insert(heading_key(h)).second) out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::string> propose_headings(const ModelGateway& gateway, std::string_view parent_heading,
                                          const std::vector<std::string>& summaries,
                                          const std::vector<std::string>& prior) {
  if (summaries.empty()) throw Error(ErrorCode::kPrecondition, "no summaries to derive headings from");
  constexpr std::string_view kHeadingsField = "List of the subsection headings";

  ChatRequest draft_req;
  draft_req.template_id = TemplateId::kOutliner;
  draft_req.variables = {{"section_title", std::string(parent_heading)}};
  const std::string draft = strip_field_prefix(gateway.chat(draft_req), kHeadingsField);

  ChatRequest rewrite_req;
  rewrite_req.template_id = TemplateId::kOutlineRewriter;
  rewrite_req.variables = {{"section_title", std::string(parent_heading)},
                           {"information_collected", format_bullets(summaries)},
                           {"current_outline", draft}};
  const std::string revised = strip_field_prefix(gateway.chat(rewrite_req), kHeadingsField);

  ChatRequest refine_req;
  refine_req.template_id = TemplateId::kOutlineRefiner;
  refine_req.variables = {{"outline", revised}};
  const std::string refined = strip_field_prefix(gateway.chat(refine_req), "Refined outline");

  std::set<std::string> banned{heading_key(parent_heading)};
  for (const auto& p : prior) banned.insert(heading_key(p));
  std::vector<std::string> headings;
  for (auto& h : parse_headings(refined)) {
    if (!banned.contains(heading_key(h))) headings.push_back(std::move(h));
  }
  if (headings.empty()) {
    throw Error(ErrorCode::kParseFailure,
                "no section heading could be parsed from the refined outline for '" +
                    std::string(parent_heading) + "'");
  }
  return headings;
}

std::size_t assign_unit(std::span<const double> unit, const std::vector<Embedding>& heading_embeddings) {
  if (heading_embeddings.empty()) throw Error(ErrorCode::kPrecondition, "no headings to assign to");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t i = 0; i < heading_embeddings.size(); ++i) {
    const Embedding& h = heading_embeddings[i];
    if (h.size() != unit.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "heading " + std::to_string(i) + " has dimension " + std::to_string(h.size()) +
                      ", unit has " + std::to_string(unit.size()));
    }
    // cosine without the unit norm, which is common to every heading
    const double hn = l2_norm(h);
    double score = 0.0;
    if (hn > 0.0) {
      double d = 0.0;
      for (std::size_t j = 0; j < h.size(); ++j) d += unit[j] * h[j];
      score = d / hn;
    }
    if (i == 0 || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

std::size_t assign_unit(const MemoryUnit& unit, const std::vector<std::string>& headings,
                        const std::vector<Embedding>& heading_embeddings) {
  if (headings.size() != heading_embeddings.size()) {
    throw Error(ErrorCode::kDimensionMismatch, std::to_string(headings.size()) + " headings but " +
                                                   std::to_string(heading_embeddings.size()) + " embeddings");
  }
  return assign_unit(std::span<const double>(unit.embedding), heading_embeddings);
}

std::string heading_probe(std::string_view topic, std::string_view heading) {
  return std::string(topic) + ": " + std::string(heading);
}

OutlineNode organize(MemoryStore& store, const ModelGateway& gateway, const OrganizeConfig& cfg) {
  cfg.validate();
  std::vector<MemoryUnit> units = store.units();
  if (units.empty()) throw Error(ErrorCode::kPrecondition, "cannot organize an empty store");
  for (auto& u : units) {
    if (u.label != store.topic()) {
      store.relabel(u.id, store.topic());
      u.label = store.topic();
    }
  }
  Organizer organizer{store, gateway, cfg};
  return organizer.build(std::move(units), store.topic(), store.topic(), 0, {});
}

std::vector<const OutlineNode*> leaves(const OutlineNode& root) {
  std::vector<const OutlineNode*> out;
  collect_leaves(root, out);
  return out;
}

std::size_t count_nodes(const OutlineNode& root) {
  std::size_t n = root.children.size();
  for (const auto& c : root.children) n += count_nodes(c);
  return n;
}

std::vector<std::string> check_outline(const OutlineNode& root, const MemoryStore& store,
                                       int max_outline_depth) {
  std::vector<std::string> problems;
  check_node(root, max_outline_depth, problems);
  std::map<std::string, std::string> owner;  // unit id -> leaf path
  for (const OutlineNode* leaf : leaves(root)) {
    for (const auto& id : leaf->assigned_unit_ids) {
      auto [it, inserted] = owner.emplace(id, leaf->path);
      if (!inserted) problems.push_back("unit " + id + " in both '" + it->second + "' and '" + leaf->path + "'");
    }
  }
  for (const auto& u : store.units()) {
    auto it = owner.find(u.id);
    if (it == owner.end()) {
      problems.push_back("unit " + u.id + " is in no leaf");
    } else if (u.label != it->second) {
      problems.push_back("unit " + u.id + " labelled '" + u.label + "' but sits in '" + it->second + "'");
    }
  }
  if (owner.size() != store.size()) {
    for (const auto& [id, path] : owner) {
      if (!store.find(id)) problems.push_back("leaf '" + path + "' lists unknown unit " + id);
    }
  }
  return problems;
}

std::string dump_outline(const OutlineNode& root, const MemoryStore* store_for_units) {
  std::string out;
  dump_node(root, store_for_units, out);
  return out;
}

nlohmann::json outline_to_json(const OutlineNode& node) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : node.children) children.push_back(outline_to_json(c));
  return {{"heading", node.heading},
          {"path", node.path},
          {"depth", node.depth},
          {"units", node.assigned_unit_ids},
          {"summaries", node.cluster_summaries},
          {"children", std::move(children)}};
}

OutlineNode outline_from_json(const nlohmann::json& json) {
  try {
    OutlineNode node;
    node.heading = json.at("heading").get<std::string>();
    node.path = json.at("path").get<std::string>();
    node.depth = json.at("depth").get<int>();
    node.assigned_unit_ids = json.at("units").get<std::vector<std::string>>();
    node.cluster_summaries = json.value("summaries", std::vector<std::string>{});
    for (const auto& c : json.at("children")) node.children.push_back(outline_from_json(c));
    return node;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseFailure, std::string("malformed outline: ") + e.what());
  }
}

}  // namespace mog
