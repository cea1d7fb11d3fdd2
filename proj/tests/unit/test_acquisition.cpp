#include <gtest/gtest.h>

#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "local_server.hpp"
#include "mog/acquisition.hpp"
#include "support.hpp"

using mog::ErrorCode;
using mog::TemplateId;
using mogtest::error_code_of;

namespace {

class MapSearch final : public mog::SearchBackend {
 public:
  std::map<std::string, std::vector<std::string>> results;
  std::vector<std::pair<std::string, int>> calls;

  std::vector<std::string> search(std::string_view query, int k) override {
    calls.emplace_back(std::string(query), k);
    auto it = results.find(std::string(query));
    if (it == results.end()) return {};
    auto urls = it->second;
    if (static_cast<int>(urls.size()) > k) urls.resize(static_cast<std::size_t>(k));
    return urls;
  }
};

class MapFetcher final : public mog::PageFetcher {
 public:
  std::map<std::string, std::string> pages;
  std::mutex mu;
  std::vector<std::string> fetched;

  mog::SourceDocument fetch(std::string_view url) override {
    std::lock_guard lock(mu);
    fetched.emplace_back(url);
    auto it = pages.find(std::string(url));
    if (it == pages.end()) throw mog::Error(ErrorCode::kFetchFailure, "no page " + std::string(url));
    mog::SourceDocument d;
    d.url = std::string(url);
    d.title = "page";
    d.text = it->second;
    return d;
  }
};

mog::SourceDocument doc_with(std::string text) {
  mog::SourceDocument d;
  d.id = "d1";
  d.url = "https://x.example/1";
  d.text = std::move(text);
  return d;
}

// n statements that all mention the topic word.
std::string facts_about(const std::string& topic, const std::string& theme, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += topic + " " + theme + " fact number " + std::to_string(i) + ". ";
  return s;
}

}  // namespace

// ---- queries ----

TEST(MakeQueries, SingleQueryIsTheTopic) {
  auto w = mogtest::make_world();
  EXPECT_EQ(mog::make_queries(*w.gateway, "Lake Varn", 1), (std::vector<std::string>{"Lake Varn"}));
  EXPECT_EQ(w.chat->calls(), 0u);
}

TEST(MakeQueries, RepeatedTopicIsDeduplicated) {
  mog::MockScript script;
  script.add(TemplateId::kQueryMaker, {}, "lake varn");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::make_queries(*w.gateway, "Lake Varn", 2), (std::vector<std::string>{"Lake Varn"}));
}

TEST(MakeQueries, ModelQueriesFollowTheTopic) {
  mog::MockScript script;
  script.add(TemplateId::kQueryMaker, {{"topic", "X"}, {"count", "1"}}, "X filming locations");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::make_queries(*w.gateway, "X", 2), (std::vector<std::string>{"X", "X filming locations"}));
}

TEST(MakeQueries, ListMarkersAndExtraLinesAreHandled) {
  mog::MockScript script;
  script.add(TemplateId::kQueryMaker, {}, "Queries:\n1. X history\n2. X history\n3. X music\n4. X food");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::make_queries(*w.gateway, "X", 3), (std::vector<std::string>{"X", "X history", "X music"}));
  EXPECT_EQ(error_code_of([&] { mog::make_queries(*w.gateway, "X", 0); }), ErrorCode::kPrecondition);
}

// ---- search ----

TEST(FixtureSearch, TruncatesAndIgnoresCommentsAndUnknownQueries) {
  mogtest::TempDir dir;
  mogtest::write_file(dir / "search/some-query.txt", "# comment\nhttps://a/1\n\nhttps://a/2\nhttps://a/3\n");
  mog::FixtureSearch s(dir / "search");
  EXPECT_EQ(s.search("Some Query", 2), (std::vector<std::string>{"https://a/1", "https://a/2"}));
  EXPECT_EQ(s.search("some query", 10).size(), 3u);
  EXPECT_TRUE(s.search("unknown query", 3).empty());
}

TEST(FixtureSearch, MissingDirectoryIsAnIoFailure) {
  EXPECT_EQ(error_code_of([] { mog::FixtureSearch("/no/such/dir"); }), ErrorCode::kIoFailure);
}

TEST(HttpSearch, ReadsOrganicResultLinks) {
  mogtest::LocalServer srv;
  std::string seen_q, seen_num, seen_key;
  srv.server.Get("/search", [&](const httplib::Request& req, httplib::Response& res) {
    seen_q = req.get_param_value("q");
    seen_num = req.get_param_value("num");
    seen_key = req.get_param_value("api_key");
    res.set_content(R"({"organic_results":[{"link":"https://a/1"},{"title":"no link"},{"link":"https://a/2"},
                       {"link":"https://a/3"}]})",
                    "application/json");
  });
  srv.start();
  ::setenv("MOG_TEST_SEARCH_KEY", "secret", 1);
  mog::HttpSearch s(srv.url("/search"), "MOG_TEST_SEARCH_KEY", std::chrono::milliseconds(2000));
  EXPECT_EQ(s.search("lake varn & co", 2), (std::vector<std::string>{"https://a/1", "https://a/2"}));
  EXPECT_EQ(seen_q, "lake varn & co");
  EXPECT_EQ(seen_num, "2");
  EXPECT_EQ(seen_key, "secret");
}

TEST(HttpSearch, TimeoutAndBadBodiesAreSearchFailures) {
  mogtest::LocalServer srv;
  srv.server.Get("/slow", [&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    res.set_content("{}", "application/json");
  });
  srv.server.Get("/bad", [&](const httplib::Request&, httplib::Response& res) { res.set_content("<html>", "text/html"); });
  srv.server.Get("/empty", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"search_information":{}})", "application/json");
  });
  srv.start();
  mog::HttpSearch slow(srv.url("/slow"), "MOG_TEST_UNSET_KEY", std::chrono::milliseconds(100));
  EXPECT_EQ(error_code_of([&] { slow.search("q", 3); }), ErrorCode::kSearchFailure);
  mog::HttpSearch bad(srv.url("/bad"), "MOG_TEST_UNSET_KEY", std::chrono::milliseconds(2000));
  EXPECT_EQ(error_code_of([&] { bad.search("q", 3); }), ErrorCode::kSearchFailure);
  mog::HttpSearch empty(srv.url("/empty"), "MOG_TEST_UNSET_KEY", std::chrono::milliseconds(2000));
  EXPECT_TRUE(empty.search("q", 3).empty());
}

// ---- fetch ----

TEST(FixtureFetcher, HtmlIsStrippedAndTextPassesThrough) {
  mogtest::TempDir dir;
  mogtest::write_file(dir / "pages/a.html", "<p>A</p><script>x</script><p>B</p>");
  mogtest::write_file(dir / "pages/b.txt", "Plain <b>text</b>\n  kept   as is.\n");
  mogtest::write_file(dir / "index.json", R"({"https://x/a": "pages/a.html", "https://x/b": "pages/b.txt"})");
  mog::FixtureFetcher f(dir / "index.json", 1000);
  EXPECT_EQ(f.fetch("https://x/a").text, "A\n\nB");
  EXPECT_EQ(f.fetch("https://x/b").text, "Plain <b>text</b>\n  kept   as is.\n");
  EXPECT_EQ(f.fetch("https://x/b").url, "https://x/b");
  EXPECT_EQ(error_code_of([&] { f.fetch("https://x/missing"); }), ErrorCode::kFetchFailure);
}

TEST(FixtureFetcher, TextIsCappedAtTheCharacterBudget) {
  mogtest::TempDir dir;
  mogtest::write_file(dir / "p.txt", std::string(50, 'a') + "é");
  mogtest::write_file(dir / "index.json", R"({"u": "p.txt"})");
  EXPECT_EQ(mog::FixtureFetcher(dir / "index.json", 10).fetch("u").text, std::string(10, 'a'));
  EXPECT_EQ(mog::FixtureFetcher(dir / "index.json", 51).fetch("u").text, std::string(50, 'a'));
}

TEST(TruncateUtf8, NeverSplitsACharacter) {
  EXPECT_EQ(mog::truncate_utf8("abc", 10), "abc");
  EXPECT_EQ(mog::truncate_utf8("aé", 2), "a");
  EXPECT_EQ(mog::truncate_utf8("aé", 3), "aé");
  EXPECT_EQ(mog::truncate_utf8("€", 2), "");
}

TEST(HttpFetcher, DispatchesOnContentType) {
  mogtest::LocalServer srv;
  srv.server.Get("/page", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("<html><head><title>T</title></head><body><p>A</p><nav>menu</nav><p>B</p></body></html>",
                    "text/html; charset=utf-8");
  });
  srv.server.Get("/plain", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("just   text", "text/plain");
  });
  srv.server.Get("/pdf", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("%PDF", "application/pdf");
  });
  srv.server.Get("/gone", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
  srv.start();
  mog::HttpFetcher f(std::chrono::milliseconds(2000), 1000);
  const auto page = f.fetch(srv.url("/page"));
  EXPECT_EQ(page.title, "T");
  EXPECT_EQ(page.text, "A\n\nB");
  EXPECT_GT(page.fetched_at, 0);
  EXPECT_EQ(f.fetch(srv.url("/plain")).text, "just   text");
  EXPECT_EQ(error_code_of([&] { f.fetch(srv.url("/pdf")); }), ErrorCode::kFetchFailure);
  EXPECT_EQ(error_code_of([&] { f.fetch(srv.url("/gone")); }), ErrorCode::kFetchFailure);
  EXPECT_EQ(error_code_of([&] { f.fetch("http://127.0.0.1:1/x"); }), ErrorCode::kFetchFailure);
  EXPECT_EQ(error_code_of([&] { f.fetch("not a url"); }), ErrorCode::kFetchFailure);
}

// ---- extraction ----

TEST(ParseStringList, AcceptedShapes) {
  using V = std::vector<std::string>;
  EXPECT_EQ(mog::parse_string_list(R"(["A","B"])"), (V{"A", "B"}));
  EXPECT_EQ(mog::parse_string_list("[]"), V{});
  EXPECT_EQ(mog::parse_string_list("Fact List: [\"A\"]"), (V{"A"}));
  EXPECT_EQ(mog::parse_string_list("```json\n[\"A\", \"B\"]\n```"), (V{"A", "B"}));
  EXPECT_EQ(mog::parse_string_list(R"(['A', "It's"])"), (V{"A", "It's"}));
  EXPECT_EQ(mog::parse_string_list("- A\n- B"), (V{"A", "B"}));
  EXPECT_EQ(error_code_of([] { mog::parse_string_list("not json"); }), ErrorCode::kParseFailure);
  EXPECT_EQ(error_code_of([] { mog::parse_string_list("[1, 2]"); }), ErrorCode::kParseFailure);
}

TEST(Extract, ParsedListBecomesUnitTexts) {
  mog::MockScript script;
  script.add(TemplateId::kExtract, {}, R"(["A","B"])");
  auto w = mogtest::make_world(script);
  const auto r = mog::extract(*w.gateway, "X", doc_with("some text"));
  EXPECT_EQ(r.facts, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(r.parse_failures, 0);
}

TEST(Extract, EmptyListMeansNoUnitsAndNoError) {
  mog::MockScript script;
  script.add(TemplateId::kExtract, {}, "[]");
  auto w = mogtest::make_world(script);
  const auto r = mog::extract(*w.gateway, "X", doc_with("off-topic text"));
  EXPECT_TRUE(r.facts.empty());
  EXPECT_EQ(r.parse_failures, 0);
  EXPECT_TRUE(r.errors.empty());
}

TEST(Extract, UnparseableCompletionIsCountedAndSkipped) {
  mog::MockScript script;
  script.add(TemplateId::kExtract, {}, "not json");
  auto w = mogtest::make_world(script);
  const auto r = mog::extract(*w.gateway, "X", doc_with("text"));
  EXPECT_TRUE(r.facts.empty());
  EXPECT_EQ(r.parse_failures, 1);
  EXPECT_EQ(r.errors.size(), 1u);
}

TEST(Extract, LongDocumentsAreWindowed) {
  auto w = mogtest::make_world();
  mog::AcquisitionConfig cfg;
  cfg.window_chars = 120;
  cfg.window_overlap = 30;
  const auto text = facts_about("Quorvath", "harbor", 12);
  const auto r = mog::extract(*w.gateway, "Quorvath", doc_with(text), cfg);
  EXPECT_EQ(r.windows, static_cast<int>(mog::split_windows(text, 120, 30).size()));
  EXPECT_GT(r.windows, 1);
  std::set<std::string> distinct(r.facts.begin(), r.facts.end());
  EXPECT_EQ(distinct.size(), r.facts.size());
}

TEST(SplitWindows, CoverWithOverlap) {
  const std::string text = "0123456789abcdefghij";
  const auto w = mog::split_windows(text, 8, 3);
  ASSERT_GE(w.size(), 2u);
  EXPECT_EQ(w.front(), "01234567");
  EXPECT_EQ(w[1].substr(0, 3), "567");
  EXPECT_EQ(w.back().back(), 'j');
  EXPECT_EQ(mog::split_windows("short", 8, 3), (std::vector<std::string>{"short"}));
  EXPECT_TRUE(mog::split_windows("", 8, 3).empty());
  EXPECT_EQ(error_code_of([] { mog::split_windows("x", 3, 3); }), ErrorCode::kPrecondition);
}

TEST(SplitWindows, RespectUtf8Boundaries) {
  std::string text;
  for (int i = 0; i < 40; ++i) text += "é";
  for (const auto& piece : mog::split_windows(text, 7, 2)) {
    EXPECT_EQ(piece.size() % 2, 0u);
    EXPECT_NE(static_cast<unsigned char>(piece[0]) & 0xC0, 0x80);
  }
}

// ---- exploration ----

TEST(Explore, DepthZeroProcessesOnlyTheRootTopic) {
  auto w = mogtest::make_world();
  MapSearch search;
  MapFetcher fetch;
  search.results["Quorvath"] = {"u1", "u2"};
  fetch.pages["u1"] = facts_about("Quorvath", "harbor", 5);
  fetch.pages["u2"] = facts_about("Quorvath", "wool", 5);
  mog::AcquisitionConfig cfg;
  cfg.budget.max_queries_per_topic = 1;
  cfg.budget.max_subtopic_depth = 0;
  mog::MemoryStore store("Quorvath", 64);
  const auto r = mog::explore("Quorvath", cfg, store, *w.gateway, search, fetch);
  EXPECT_EQ(r.subtopic_rounds, 0);
  EXPECT_EQ(r.per_depth.size(), 1u);
  EXPECT_EQ(r.topics.size(), 1u);
  EXPECT_EQ(w.chat->calls(TemplateId::kSubtopicMaker), 0u);
  EXPECT_EQ(r.pages_fetched, 2);
  EXPECT_EQ(r.pages_with_units, r.pages_fetched);
  EXPECT_EQ(r.units_saved, 10);
  EXPECT_EQ(store.size(), 10u);
}

TEST(Explore, SubtopicBelowThresholdIsNotExpanded) {
  mog::MockScript script;
  script.add(TemplateId::kSubtopicMaker, {{"subtopic", "Quorvath"}}, "Quorvath alpha\nQuorvath beta");
  script.add(TemplateId::kSubtopicMaker, {{"subtopic", "Quorvath beta"}}, "Quorvath gamma");
  script.add(TemplateId::kSubtopicMaker, {{"subtopic", "Quorvath alpha"}}, "Quorvath delta");
  auto w = mogtest::make_world(script);
  MapSearch search;
  MapFetcher fetch;
  search.results["Quorvath"] = {"root"};
  search.results["Quorvath alpha"] = {"a"};
  search.results["Quorvath beta"] = {"b"};
  search.results["Quorvath gamma"] = {"g"};
  fetch.pages["root"] = facts_about("Quorvath", "root", 4);
  fetch.pages["a"] = facts_about("Quorvath", "alpha", 1);
  fetch.pages["b"] = facts_about("Quorvath", "beta", 3);
  fetch.pages["g"] = facts_about("Quorvath", "gamma", 2);
  mog::AcquisitionConfig cfg;
  cfg.budget.max_queries_per_topic = 1;
  cfg.budget.max_subtopic_depth = 2;
  cfg.budget.min_new_units_to_continue = 3;
  mog::MemoryStore store("Quorvath", 64);
  const auto r = mog::explore("Quorvath", cfg, store, *w.gateway, search, fetch);

  std::map<std::string, mog::ExploredTopic> by_name;
  for (const auto& t : r.topics) by_name[t.name] = t;
  ASSERT_EQ(by_name.size(), 4u);
  EXPECT_TRUE(by_name["Quorvath"].expanded);
  EXPECT_FALSE(by_name["Quorvath alpha"].expanded);
  EXPECT_EQ(by_name["Quorvath alpha"].new_units, 1);
  EXPECT_TRUE(by_name["Quorvath beta"].expanded);
  EXPECT_EQ(by_name["Quorvath gamma"].depth, 2);
  EXPECT_FALSE(by_name.count("Quorvath delta"));
  EXPECT_EQ(r.subtopic_rounds, 2);
  EXPECT_EQ(r.units_saved, 10);
}

TEST(Explore, BudgetProvenanceAndFailureAccounting) {
  auto w = mogtest::make_world();
  MapSearch search;
  MapFetcher fetch;
  // The default query maker proposes "<topic> history".
  search.results["Quorvath"] = {"u1", "u2", "u3", "u4"};
  search.results["Quorvath history"] = {"u1", "broken", "empty", "u5"};
  for (int i = 1; i <= 5; ++i) fetch.pages["u" + std::to_string(i)] = facts_about("Quorvath", "t" + std::to_string(i), 3);
  fetch.pages["empty"] = "   ";
  mog::AcquisitionConfig cfg;
  cfg.budget = {2, 3, 2, 3, 3};
  mog::MemoryStore store("Quorvath", 64);
  const auto r = mog::explore("Quorvath", cfg, store, *w.gateway, search, fetch);

  EXPECT_LE(r.queries_issued, cfg.budget.max_queries_per_topic * static_cast<int>(r.topics.size()));
  for (const auto& [q, k] : search.calls) EXPECT_EQ(k, cfg.budget.max_webpages_per_query) << q;
  std::map<std::string, int> per_query;
  for (const auto& d : r.documents) ++per_query[d.query];
  for (const auto& [q, n] : per_query) EXPECT_LE(n, cfg.budget.max_webpages_per_query) << q;
  for (const auto& t : r.topics) EXPECT_LE(t.depth, cfg.budget.max_subtopic_depth);

  // u1 is never refetched; broken and empty pages are failures, not documents.
  EXPECT_EQ(std::count(fetch.fetched.begin(), fetch.fetched.end(), "u1"), 1);
  EXPECT_EQ(r.fetch_failures, 2);
  std::set<std::string> doc_ids;
  for (const auto& d : r.documents) doc_ids.insert(d.id);
  for (const auto& u : store.units()) {
    EXPECT_TRUE(doc_ids.count(u.source_doc_id)) << u.source_doc_id;
    EXPECT_EQ(u.label, "Quorvath");
  }
  EXPECT_EQ(static_cast<std::size_t>(r.units_saved), store.size());
  int per_depth_units = 0;
  for (const auto& d : r.per_depth) per_depth_units += d.units_saved;
  EXPECT_EQ(per_depth_units, r.units_saved);
}

TEST(Explore, NothingSavedIsInsufficientData) {
  auto w = mogtest::make_world();
  MapSearch search;
  MapFetcher fetch;
  search.results["Quorvath"] = {"u1"};
  fetch.pages["u1"] = "Nothing relevant here. Other islands only.";
  mog::MemoryStore store("Quorvath", 64);
  EXPECT_EQ(error_code_of([&] { mog::explore("Quorvath", {}, store, *w.gateway, search, fetch); }),
            ErrorCode::kInsufficientData);
}

TEST(Explore, StoreTopicMustMatch) {
  auto w = mogtest::make_world();
  MapSearch search;
  MapFetcher fetch;
  mog::MemoryStore store("Other", 64);
  EXPECT_EQ(error_code_of([&] { mog::explore("Quorvath", {}, store, *w.gateway, search, fetch); }),
            ErrorCode::kPrecondition);
}

TEST(Explore, ReportJsonRoundtrip) {
  auto w = mogtest::make_world();
  MapSearch search;
  MapFetcher fetch;
  search.results["Quorvath"] = {"u1", "missing"};
  fetch.pages["u1"] = facts_about("Quorvath", "harbor", 4);
  mog::MemoryStore store("Quorvath", 64);
  const auto r = mog::explore("Quorvath", {}, store, *w.gateway, search, fetch);
  const auto j = mog::report_to_json(r);
  EXPECT_EQ(mog::report_to_json(mog::report_from_json(j)), j);
  ASSERT_NE(r.document("d1"), nullptr);
  EXPECT_EQ(r.document("d1")->url, "u1");
  EXPECT_EQ(r.document("d9"), nullptr);
}

TEST(ExplorationBudget, DefaultsAndValidation) {
  mog::ExplorationBudget b;
  EXPECT_EQ(b.max_queries_per_topic, 2);
  EXPECT_EQ(b.max_webpages_per_query, 3);
  EXPECT_EQ(b.max_subtopic_depth, 2);
  EXPECT_NO_THROW(b.validate());
  b.min_new_units_to_continue = 0;
  EXPECT_NO_THROW(b.validate());
  b.max_webpages_per_query = 0;
  EXPECT_EQ(error_code_of([&] { b.validate(); }), ErrorCode::kInvalidConfig);
}
