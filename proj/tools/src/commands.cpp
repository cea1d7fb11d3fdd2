#include "mog/cli/commands.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mog/acquisition.hpp"
#include "mog/article_io.hpp"
#include "mog/evaluation.hpp"
#include "mog/generation.hpp"
#include "mog/memory_store.hpp"
#include "mog/organization.hpp"
#include "mog/recognizer.hpp"
#include "mog/text.hpp"

namespace mog::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <class F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const json::exception& e) {
    throw StageError(name, Error(ErrorCode::kParseFailure, e.what()));
  } catch (const fs::filesystem_error& e) {
    throw StageError(name, Error(ErrorCode::kIoFailure, e.what()));
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

ModelGateway make_gateway(const PipelineConfig& cfg) {
  return ModelGateway(make_chat_backend(cfg.chat), make_embed_backend(cfg.embed), cfg.routing,
                      cfg.chat.max_concurrency);
}

std::unique_ptr<SearchBackend> make_search(const SearchConfig& s) {
  if (s.kind == SourceKind::kHttp) return std::make_unique<HttpSearch>(s.endpoint, s.api_key_env, s.timeout);
  return std::make_unique<FixtureSearch>(s.fixture_dir);
}

std::unique_ptr<PageFetcher> make_fetcher(const PagesConfig& p) {
  if (p.kind == SourceKind::kHttp) return std::make_unique<HttpFetcher>(p.timeout, p.max_document_chars);
  return std::make_unique<FixtureFetcher>(p.index, p.max_document_chars);
}

struct LabelNode {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> texts;
  std::vector<LabelNode> children;

  LabelNode& child(const std::string& n) {
    for (auto& c : children) {
      if (c.name == n) return c;
    }
    children.push_back({n, 0, {}, {}});
    return children.back();
  }
};

void print_labels(const LabelNode& node, int depth, bool units, std::ostream& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out << indent << node.name << " (" << node.count << ")\n";
  if (units) {
    for (const auto& t : node.texts) out << indent << "  - " << t << "\n";
  }
  for (const auto& c : node.children) print_labels(c, depth + 1, units, out);
}

}  // namespace

StageError::StageError(std::string stage, const Error& cause)
    : std::runtime_error("[" + stage + "] " + cause.what()), stage_(std::move(stage)), code_(cause.code()) {}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot move '" + tmp.string() + "' into place: " + ec.message());
}

GenerateResult run_generate(const GenerateOptions& options) {
  GenerateOptions o = options;
  PipelineConfig cfg = stage("config", [&] {
    PipelineConfig c = load_config(o.config);
    c.validate_sources();
    return c;
  });
  if (o.topic.empty()) throw StageError("config", Error(ErrorCode::kInvalidConfig, "topic must not be empty"));
  if (o.out.empty() && cfg.output_dir) o.out = *cfg.output_dir;
  if (o.out.empty()) {
    throw StageError("config", Error(ErrorCode::kInvalidConfig, "no output directory: pass --out or set output_dir"));
  }
  if (o.no_subtopic_explorer) cfg.acquisition.subtopic_explorer = false;
  if (o.no_memory_organization) cfg.organization.single_level = true;

  auto [gateway, search, fetcher] = stage("setup", [&] {
    return std::make_tuple(make_gateway(cfg), make_search(cfg.search), make_fetcher(cfg.pages));
  });
  MemoryStore store(o.topic, gateway.dimension());

  const ConstructionReport report = stage("acquisition", [&] {
    return explore(o.topic, cfg.acquisition, store, gateway, *search, *fetcher);
  });
  const OutlineNode outline = stage("organization", [&] { return organize(store, gateway, cfg.organization); });

  GenerationStats gen_stats;
  const Article article = stage("generation", [&] {
    std::map<std::string, std::string> urls;
    for (const auto& d : report.documents) urls[d.id] = d.url;
    return assemble_and_cite(outline, store, gateway, urls, cfg.generation, &gen_stats);
  });

  auto [rendered, sidecar_json] = stage("render", [&] {
    std::vector<std::string> collected;
    for (const auto& d : report.documents) {
      if (d.units_saved > 0) collected.push_back(d.id);
    }
    return std::make_pair(render(article), sidecar_to_json(make_sidecar(article, store, collected)));
  });

  json report_json = report_to_json(report);
  report_json["ablations"] = {{"subtopic_explorer", !o.no_subtopic_explorer},
                              {"memory_organization", !o.no_memory_organization}};
  report_json["outline"] = {{"sections", count_nodes(outline)},
                            {"first_level_sections", outline.children.size()},
                            {"leaves", leaves(outline).size()}};
  report_json["generation"] = {{"sections_written", gen_stats.sections_written},
                               {"sentences", gen_stats.sentences},
                               {"cited_sentences", gen_stats.cited_sentences},
                               {"citation_parse_failures", gen_stats.citation_parse_failures}};

  return stage("output", [&] {
    fs::create_directories(o.out);
    const fs::path staging = o.out / (".staging-" + text::slugify(o.topic));
    fs::remove_all(staging);
    fs::create_directories(staging);
    const std::vector<std::pair<std::string, std::string>> files = {
        {"article.md", rendered},
        {"article.json", dump(sidecar_json)},
        {"construction_report.json", dump(report_json)},
        {"outline.json", dump(outline_to_json(outline))},
    };
    for (const auto& [name, content] : files) write_file_atomic(staging / name, content);
    store.persist(staging / "store.jsonl");

    GenerateResult result;
    for (const auto& name : {"article.md", "article.json", "construction_report.json", "outline.json", "store.jsonl"}) {
      fs::rename(staging / name, o.out / name);
    }
    fs::remove_all(staging);
    if (cfg.store_path) store.persist(*cfg.store_path);
    result.article = o.out / "article.md";
    result.sidecar = o.out / "article.json";
    result.report = o.out / "construction_report.json";
    result.outline = o.out / "outline.json";
    result.store = o.out / "store.jsonl";
    result.sections = static_cast<int>(count_nodes(outline));
    result.units = static_cast<int>(store.size());
    result.pages_fetched = report.pages_fetched;
    return result;
  });
}

json run_evaluate(const EvaluateOptions& o) {
  const auto [article_text, sidecar] = stage("input", [&] {
    if (!fs::exists(o.sidecar)) {
      throw Error(ErrorCode::kIoFailure,
                  "sidecar '" + o.sidecar.string() + "' not found; citation metrics need the unit-level links");
    }
    const json j = json::parse(read_text_file(o.sidecar), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kParseFailure, "sidecar '" + o.sidecar.string() + "' is not JSON");
    return std::make_pair(read_text_file(o.article), sidecar_from_json(j));
  });
  PipelineConfig cfg;
  if (o.config) cfg = stage("config", [&] { return load_config(*o.config); });
  ModelGateway gateway = stage("setup", [&] { return make_gateway(cfg); });
  RuleRecognizer recognizer;

  EvalReport report;
  stage("informativeness", [&] {
    report.info = informativeness(article_text, recognizer);
    if (o.article_mentions) {
      const MentionSet m = load_mentions(*o.article_mentions);
      report.info.entity_count = static_cast<int>(m.entities.size());
      report.info.numerical_count = static_cast<int>(m.numerals.size());
    }
    return 0;
  });
  report.citation = stage("citation", [&] { return citation_metrics(sidecar, gateway); });
  report.utilization = stage("utilization", [&] { return utilization(sidecar); });
  if (!report.utilization.rate) report.notes.push_back("utilization_rate undefined: no page yielded memory units");

  if (o.reference) {
    report.has_reference = true;
    stage("reference", [&] {
      const std::string reference = article_prose(read_text_file(*o.reference));
      const std::string candidate = article_prose(article_text);
      const MentionSet mentions =
          o.reference_mentions ? load_mentions(*o.reference_mentions) : recognize(recognizer, reference);
      auto guarded = [&](const char* name, auto&& compute) -> std::optional<double> {
        try {
          return compute();
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kEmptyReference) throw;
          report.notes.push_back(std::string(name) + " undefined: " + e.what());
          return std::nullopt;
        }
      };
      std::optional<RougeRecall> rouge;
      try {
        rouge = rouge_recall(candidate, reference);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyReference) throw;
        report.notes.push_back(std::string("rouge undefined: ") + e.what());
      }
      if (rouge) {
        report.rouge1_recall = rouge->rouge1;
        report.rougeL_recall = rouge->rougeL;
      }
      report.entity_recall = guarded("entity_recall", [&] { return entity_recall(candidate, mentions.entities); });
      report.numerical_recall =
          guarded("numerical_recall", [&] { return numerical_recall(candidate, mentions.numerals, recognizer); });
      return 0;
    });
  }
  json j = eval_report_to_json(report);
  stage("output", [&] {
    if (o.out.has_parent_path()) fs::create_directories(o.out.parent_path());
    write_file_atomic(o.out, dump(j));
    return 0;
  });
  return j;
}

json aggregate_reports(const std::vector<json>& reports) {
  static const std::vector<std::string> kMetrics = {
      "section_count_total", "section_count_first_level", "word_count",      "entity_count",
      "numerical_count",     "citation_rate",             "citation_recall", "citation_precision",
      "rouge1_recall",       "rougeL_recall",             "entity_recall",   "numerical_recall",
      "pages_collected",     "pages_cited",               "utilization_rate"};
  json macro = json::object();
  for (const auto& key : kMetrics) {
    std::vector<std::optional<double>> values;
    for (const auto& r : reports) {
      if (r.contains(key) && r[key].is_number()) values.emplace_back(r[key].get<double>());
    }
    if (values.empty()) continue;
    const auto mean = macro_average(values);
    macro[key] = {{"mean", *mean}, {"topics", values.size()}};
  }
  double collected = 0;
  double cited = 0;
  for (const auto& r : reports) {
    collected += r.value("pages_collected", 0.0);
    cited += r.value("pages_cited", 0.0);
  }
  return {{"topics", reports.size()},
          {"macro", std::move(macro)},
          {"pooled_utilization_rate", collected > 0 ? json(100.0 * cited / collected) : json(nullptr)}};
}

void run_inspect(const InspectOptions& o, std::ostream& out) {
  const MemoryStore store = stage("load", [&] { return MemoryStore::load(o.store); });
  if (store.empty()) {
    out << "0 units\n";
  } else {
    LabelNode forest;
    for (const auto& u : store.units()) {
      std::vector<std::string> path;
      const std::string& topic = store.topic();
      if (u.label == topic || u.label.rfind(topic + "/", 0) == 0) {
        path.push_back(topic);
        std::string rest = u.label.substr(std::min(u.label.size(), topic.size() + 1));
        std::size_t start = 0;
        while (!rest.empty() && start <= rest.size()) {
          const std::size_t slash = rest.find('/', start);
          path.push_back(rest.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
          if (slash == std::string::npos) break;
          start = slash + 1;
        }
      } else {
        path.push_back(u.label);
      }
      LabelNode* node = &forest;
      for (const auto& seg : path) {
        node = &node->child(seg);
        ++node->count;
      }
      node->texts.push_back(u.text);
    }
    for (const auto& root : forest.children) print_labels(root, 0, o.units, out);
  }
  if (o.outline) {
    const OutlineNode outline = stage("load", [&] {
      const json j = json::parse(read_text_file(*o.outline), nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::kParseFailure, "outline '" + o.outline->string() + "' is not JSON");
      return outline_from_json(j);
    });
    out << "\noutline:\n" << dump_outline(outline, o.units ? &store : nullptr);
  }
}

}  // namespace mog::cli
