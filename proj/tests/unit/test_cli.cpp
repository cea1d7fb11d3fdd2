#include <gtest/gtest.h>

#include <sstream>

#include "mog/article_io.hpp"
#include "mog/cli/commands.hpp"
#include "mog/cli/config.hpp"
#include "support.hpp"

namespace cli = mog::cli;
namespace fs = std::filesystem;
using mog::ErrorCode;
using nlohmann::json;

namespace {

const fs::path kConfig = mogtest::kFixtureDir / "config.json";

std::string config_error(const json& j) {
  try {
    cli::parse_config(j, "/base");
  } catch (const mog::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    return e.what();
  }
  ADD_FAILURE() << "accepted " << j.dump();
  return {};
}

json read_json(const fs::path& p) { return json::parse(mogtest::read_file(p)); }

cli::GenerateResult generate(const fs::path& out, const std::string& topic = "Orliac", bool no_sub = false,
                             bool no_org = false) {
  cli::GenerateOptions o;
  o.topic = topic;
  o.config = kConfig;
  o.out = out;
  o.no_subtopic_explorer = no_sub;
  o.no_memory_organization = no_org;
  return cli::run_generate(o);
}

}  // namespace

// ---- config ----

TEST(Config, Defaults) {
  const json minimal = {{"search", {{"fixture_dir", "s"}}}, {"pages", {{"index", "p.json"}}}};
  const auto cfg = cli::parse_config(minimal, "/base");
  EXPECT_EQ(cfg.acquisition.budget.max_queries_per_topic, 2);
  EXPECT_EQ(cfg.acquisition.budget.max_webpages_per_query, 3);
  EXPECT_EQ(cfg.acquisition.budget.max_subtopic_depth, 2);
  EXPECT_EQ(cfg.organization.recursion_threshold, 12u);
  EXPECT_TRUE(cfg.generation.cite);
  EXPECT_EQ(cfg.chat.kind, mog::BackendKind::kMock);
  EXPECT_EQ(cfg.search.fixture_dir, fs::path("/base/s"));
}

TEST(Config, SourcesAreOnlyRequiredForGeneration) {
  const auto judge_only = cli::parse_config({{"chat", {{"kind", "mock"}}}}, "/base");
  try {
    judge_only.validate_sources();
    FAIL() << "expected an error";
  } catch (const mog::Error& e) {
    EXPECT_NE(std::string(e.what()).find("/search/fixture_dir"), std::string::npos);
  }
}

TEST(Config, UnknownKeyIsReportedWithItsPointer) {
  EXPECT_NE(config_error({{"organization", {{"recursion_treshold", 3}}}}).find("/organization/recursion_treshold"),
            std::string::npos);
  EXPECT_NE(config_error({{"colour", "red"}}).find("/colour"), std::string::npos);
}

TEST(Config, TypeAndRangeErrors) {
  EXPECT_NE(config_error({{"budget", {{"max_queries_per_topic", "two"}}}}).find("/budget/max_queries_per_topic"),
            std::string::npos);
  EXPECT_NE(config_error({{"organization", {{"k", 0}}}}).find("/organization/k"), std::string::npos);
  EXPECT_NE(config_error({{"chat", {{"kind", "grpc"}}}}).find("/chat/kind"), std::string::npos);
  EXPECT_NE(config_error({{"embed", {{"dimension", 0}}}}).find("/embed/dimension"), std::string::npos);
  EXPECT_NE(config_error({{"models", {{"overrides", {{"no_such_template", "m"}}}}}}).find("no_such_template"),
            std::string::npos);
  config_error(json::array());
}

TEST(Config, RelativePathsResolveAgainstTheConfigDirectory) {
  const auto cfg = cli::load_config(kConfig);
  EXPECT_EQ(cfg.search.fixture_dir, fs::absolute(mogtest::kFixtureDir) / "search");
  EXPECT_EQ(cfg.pages.index, fs::absolute(mogtest::kFixtureDir) / "pages.json");
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.embed.dimension, 256u);
  const auto j = cli::config_to_json(cfg);
  EXPECT_EQ(j["budget"]["min_new_units_to_continue"], 3);
}

TEST(Config, MissingOrInvalidFile) {
  mogtest::TempDir dir;
  EXPECT_EQ(mogtest::error_code_of([&] { cli::load_config(dir / "none.json"); }), ErrorCode::kIoFailure);
  mogtest::write_file(dir / "bad.json", "{ not json");
  EXPECT_EQ(mogtest::error_code_of([&] { cli::load_config(dir / "bad.json"); }), ErrorCode::kInvalidConfig);
}

// ---- generate ----

TEST(Generate, WritesAllArtifacts) {
  mogtest::TempDir dir;
  const auto r = generate(dir / "out");
  for (const auto& p : {r.article, r.sidecar, r.report, r.outline, r.store}) EXPECT_TRUE(fs::exists(p)) << p;
  EXPECT_GT(r.units, 0);
  EXPECT_GT(r.pages_fetched, 0);
  EXPECT_GT(r.sections, 1);
  const auto report = read_json(r.report);
  EXPECT_EQ(report["ablations"]["subtopic_explorer"], true);
  EXPECT_GT(report["subtopic_rounds"].get<int>(), 0);
  EXPECT_EQ(report["outline"]["sections"], r.sections);
  const auto sidecar = mog::sidecar_from_json(read_json(r.sidecar));
  EXPECT_EQ(sidecar.topic, "Orliac");
  EXPECT_EQ(mog::MemoryStore::load(r.store).size(), static_cast<std::size_t>(r.units));
  for (const auto& e : fs::directory_iterator(dir / "out"))
    EXPECT_NE(e.path().filename().string().rfind(".staging", 0), 0u) << e.path();
}

TEST(Generate, NoSubtopicExplorerFetchesFewerPages) {
  mogtest::TempDir dir;
  const auto full = generate(dir / "full");
  const auto flat = generate(dir / "flat", "Orliac", true);
  EXPECT_LT(flat.pages_fetched, full.pages_fetched);
  const auto report = read_json(flat.report);
  EXPECT_EQ(report["subtopic_rounds"], 0);
  EXPECT_EQ(report["ablations"]["subtopic_explorer"], false);
}

TEST(Generate, NoMemoryOrganizationGivesASingleLevel) {
  mogtest::TempDir dir;
  const auto r = generate(dir / "o", "Varnholm", false, true);
  const auto report = read_json(r.report);
  EXPECT_EQ(report["outline"]["sections"], report["outline"]["first_level_sections"]);
  const auto text = mogtest::read_file(r.article);
  EXPECT_EQ(text.find("\n## "), std::string::npos);
}

TEST(Generate, StageErrorsNameTheStage) {
  mogtest::TempDir dir;
  try {
    generate(dir / "x", "Nowhere Known");
    FAIL() << "expected a stage error";
  } catch (const cli::StageError& e) {
    EXPECT_EQ(e.stage(), "acquisition");
    EXPECT_EQ(std::string(e.what()).rfind("[acquisition] ", 0), 0u) << e.what();
  }
  EXPECT_FALSE(fs::exists(dir / "x" / "article.md"));

  mogtest::write_file(dir / "cfg.json", R"({"bogus": 1})");
  cli::GenerateOptions o{"Orliac", dir / "cfg.json", dir / "y"};
  try {
    cli::run_generate(o);
    FAIL() << "expected a stage error";
  } catch (const cli::StageError& e) {
    EXPECT_EQ(e.stage(), "config");
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
}

TEST(Generate, OutputDirectoryFallsBackToConfig) {
  mogtest::TempDir dir;
  auto j = read_json(kConfig);
  j["search"]["fixture_dir"] = (mogtest::kFixtureDir / "search").string();
  j["pages"]["index"] = (mogtest::kFixtureDir / "pages.json").string();
  j["chat"]["mock_script"] = (mogtest::kFixtureDir / "mock_script.json").string();
  j["paths"] = {{"output", "articles"}};
  mogtest::write_file(dir / "cfg.json", j.dump());
  cli::GenerateOptions o{"Orliac", dir / "cfg.json", {}};
  const auto r = cli::run_generate(o);
  EXPECT_EQ(r.article, dir / "articles" / "article.md");
  EXPECT_TRUE(fs::exists(r.article));
}

// ---- evaluate ----

TEST(Evaluate, FixtureArticleScoresFullCitationQuality) {
  mogtest::TempDir dir;
  const auto r = generate(dir / "gen");
  cli::EvaluateOptions e;
  e.article = r.article;
  e.sidecar = r.sidecar;
  e.config = kConfig;
  e.out = dir / "eval" / "report.json";
  const auto j = cli::run_evaluate(e);
  EXPECT_EQ(read_json(e.out), j);
  EXPECT_DOUBLE_EQ(j["citation_rate"].get<double>(), 100.0);
  EXPECT_GT(j["section_count_total"].get<int>(), 0);
  EXPECT_FALSE(j.contains("rouge1_recall"));
  EXPECT_TRUE(j["utilization_rate"].is_number());
}

TEST(Evaluate, WithAReference) {
  mogtest::TempDir dir;
  const auto r = generate(dir / "gen");
  mogtest::write_file(dir / "ref.md", mogtest::read_file(r.article));
  cli::EvaluateOptions e;
  e.article = r.article;
  e.sidecar = r.sidecar;
  e.reference = dir / "ref.md";
  e.out = dir / "report.json";
  const auto j = cli::run_evaluate(e);
  EXPECT_DOUBLE_EQ(j["rouge1_recall"].get<double>(), 100.0);
  EXPECT_DOUBLE_EQ(j["rougeL_recall"].get<double>(), 100.0);
  EXPECT_DOUBLE_EQ(j["entity_recall"].get<double>(), 100.0);
}

TEST(Evaluate, MissingSidecarIsAnInputError) {
  mogtest::TempDir dir;
  mogtest::write_file(dir / "a.md", "Text.\n\n# References\n");
  cli::EvaluateOptions e;
  e.article = dir / "a.md";
  e.sidecar = dir / "a.json";
  e.out = dir / "r.json";
  try {
    cli::run_evaluate(e);
    FAIL() << "expected a stage error";
  } catch (const cli::StageError& err) {
    EXPECT_EQ(err.stage(), "input");
    EXPECT_EQ(err.code(), ErrorCode::kIoFailure);
    EXPECT_NE(std::string(err.what()).find("sidecar"), std::string::npos);
  }
}

// ---- aggregate ----

TEST(Aggregate, MacroAverageAndPooledUtilization) {
  const std::vector<json> reports{
      {{"pages_collected", 5}, {"pages_cited", 3}, {"utilization_rate", 60.0}, {"citation_recall", nullptr}},
      {{"pages_collected", 2}, {"pages_cited", 2}, {"utilization_rate", 100.0}, {"citation_recall", 90.0}},
  };
  const auto agg = cli::aggregate_reports(reports);
  EXPECT_EQ(agg["topics"], 2);
  EXPECT_DOUBLE_EQ(agg["macro"]["utilization_rate"]["mean"].get<double>(), 80.0);
  EXPECT_NEAR(agg["pooled_utilization_rate"].get<double>(), 500.0 / 7.0, 1e-12);
  EXPECT_EQ(agg["macro"]["citation_recall"]["topics"], 1);
  EXPECT_FALSE(agg["macro"].contains("rouge1_recall"));
}

// ---- inspect ----

TEST(Inspect, EmptyStore) {
  mogtest::TempDir dir;
  mog::MemoryStore("Topic", 2).persist(dir / "s.jsonl");
  std::ostringstream out;
  cli::run_inspect({dir / "s.jsonl", std::nullopt, false}, out);
  EXPECT_EQ(out.str(), "0 units\n");
}

TEST(Inspect, LabelTreeAndUnits) {
  mogtest::TempDir dir;
  mog::MemoryStore store("Topic", 2);
  for (int i = 0; i < 5; ++i) store.save("fact " + std::to_string(i), "Topic", std::vector<double>{1, 0}, "d");
  store.persist(dir / "one.jsonl");
  std::ostringstream out;
  cli::run_inspect({dir / "one.jsonl", std::nullopt, false}, out);
  EXPECT_EQ(out.str(), "Topic (5)\n");

  store.relabel(store.units()[0].id, "Topic/Alpha");
  store.relabel(store.units()[1].id, "Topic/Alpha/Deep");
  store.persist(dir / "tree.jsonl");
  std::ostringstream tree;
  cli::run_inspect({dir / "tree.jsonl", std::nullopt, true}, tree);
  EXPECT_EQ(tree.str(),
            "Topic (5)\n  - fact 2\n  - fact 3\n  - fact 4\n"
            "  Alpha (2)\n    - fact 0\n    Deep (1)\n      - fact 1\n");
}

TEST(Inspect, MissingStore) {
  std::ostringstream out;
  EXPECT_THROW(cli::run_inspect({"/nonexistent/store.jsonl", std::nullopt, false}, out), cli::StageError);
}
