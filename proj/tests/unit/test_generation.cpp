#include <gtest/gtest.h>

#include <regex>

#include "mog/article_io.hpp"
#include "mog/generation.hpp"
#include "support.hpp"

using mog::ErrorCode;
using mog::MemoryUnit;
using mog::OutlineNode;
using mog::TemplateId;
using mogtest::error_code_of;

namespace {

const std::string kTopic = "Lake Varn";

struct Fixture {
  mog::MemoryStore store{kTopic, 64};
  std::map<std::string, std::string> urls;
  std::map<std::string, std::string> ids;  // short name -> unit id

  explicit Fixture(const mog::ModelGateway& gw) {
    const std::vector<std::tuple<std::string, std::string, std::string, std::string>> rows{
        {"depth", "Lake Varn/Geography/Basin", "Lake Varn is 80 metres deep at its centre.", "d1"},
        {"glacier", "Lake Varn/Geography/Basin", "Glaciers carved the Lake Varn basin.", "d2"},
        {"shore", "Lake Varn/Geography/Shoreline", "The Lake Varn shoreline is rocky and steep.", "d1"},
        {"festival", "Lake Varn/Culture", "A music festival is held at Lake Varn each July.", "d3"},
        {"painters", "Lake Varn/Culture", "Painters have long visited Lake Varn.", "d4"},
    };
    for (const auto& [name, label, text, doc] : rows) {
      ids[name] = store.save(text, label, gw.embed({text}).front(), doc);
      urls[doc] = "https://example.org/" + doc;
    }
  }

  OutlineNode leaf_outline() const {
    OutlineNode root{kTopic, kTopic, 0, {}, {}, {}};
    for (const auto& u : store.units()) root.assigned_unit_ids.push_back(u.id);
    return root;
  }

  OutlineNode deep_outline() const {
    OutlineNode root{kTopic, kTopic, 0, {}, {}, {"Lake Varn is a deep glacial lake.", "Lake Varn hosts a festival."}};
    OutlineNode geo{"Geography", "Lake Varn/Geography", 1, {}, {}, {}};
    geo.children.push_back({"Basin", "Lake Varn/Geography/Basin", 2, {}, {ids.at("depth"), ids.at("glacier")}, {}});
    geo.children.push_back({"Shoreline", "Lake Varn/Geography/Shoreline", 2, {}, {ids.at("shore")}, {}});
    root.children.push_back(geo);
    root.children.push_back({"Culture", "Lake Varn/Culture", 1, {}, {ids.at("festival"), ids.at("painters")}, {}});
    return root;
  }
};

MemoryUnit unit(std::string id, std::string text) {
  MemoryUnit u;
  u.id = std::move(id);
  u.text = std::move(text);
  return u;
}

std::string strip_citations(const std::string& rendered) {
  static const std::regex group(R"(\[\d+(?:,\d+)*\])");
  return std::regex_replace(rendered.substr(0, rendered.find("# References")), group, "");
}

}  // namespace

// ---- section writing ----

TEST(WriteSection, ReturnsTheCleanedCompletion) {
  mog::MockScript script;
  script.add(TemplateId::kSectionWriter, {{"section_name", "Basin"}},
             "Section content: # Basin\nThe basin is deep. It is cold.");
  auto w = mogtest::make_world(script);
  const auto text = mog::write_section(*w.gateway, kTopic, "Basin", {unit("u1", "deep"), unit("u2", "cold")});
  EXPECT_EQ(text, "The basin is deep. It is cold.");
}

TEST(WriteSection, FactListIsBulleted) {
  mog::MockScript script;
  script.add(TemplateId::kSectionWriter, {{"fact_list", "- fact one\n- fact two"}}, "Matched.");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::write_section(*w.gateway, kTopic, "X", {unit("a", "fact one"), unit("b", "fact two")}), "Matched.");
}

TEST(WriteSection, NoUnitsIsAPrecondition) {
  auto w = mogtest::make_world();
  EXPECT_EQ(error_code_of([&] { mog::write_section(*w.gateway, kTopic, "Empty", {}); }), ErrorCode::kPrecondition);
}

TEST(CleanSectionText, OnlyARepeatedHeadingLineIsRemoved) {
  EXPECT_EQ(mog::clean_section_text("## basin\nText.", "Basin"), "Text.");
  EXPECT_EQ(mog::clean_section_text("Basin\n\nText.", "Basin"), "Text.");
  EXPECT_EQ(mog::clean_section_text("Basin waters are cold.", "Basin"), "Basin waters are cold.");
  EXPECT_EQ(mog::clean_section_text("# Basin", "Basin"), "");
}

TEST(WriteLead, UsesTheLeadHeadingAndSummaries) {
  mog::MockScript script;
  script.add(TemplateId::kSectionWriter, {{"section_name", "Lead"}, {"fact_list", "- s1\n- s2"}},
             "Lead\nA short lead.");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::write_lead(*w.gateway, kTopic, {"s1", "s2"}), "A short lead.");
  EXPECT_EQ(error_code_of([&] { mog::write_lead(*w.gateway, kTopic, {}); }), ErrorCode::kPrecondition);
}

TEST(RefineSection, ImprovedTextReplacesDraft) {
  mog::MockScript script;
  script.add(TemplateId::kSectionRefiner, {{"text", "Draft text."}}, "Refined Text: Better text.");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::refine_section(*w.gateway, kTopic, "Basin", "Draft text."), "Better text.");
}

TEST(RefineSection, EmptyCompletionKeepsDraft) {
  mog::MockScript script;
  script.set_default(TemplateId::kSectionRefiner, "   ");
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::refine_section(*w.gateway, kTopic, "Basin", "Draft text."), "Draft text.");
}

TEST(RefineSection, DefaultMockPassesThrough) {
  auto w = mogtest::make_world();
  EXPECT_EQ(mog::refine_section(*w.gateway, kTopic, "Basin", "Draft one. Draft two."), "Draft one. Draft two.");
  EXPECT_EQ(error_code_of([&] { mog::refine_section(*w.gateway, kTopic, "Basin", " "); }), ErrorCode::kPrecondition);
}

// ---- citations ----

TEST(ParseIndexList, AcceptedShapes) {
  EXPECT_EQ(mog::parse_index_list("[0, 2]"), (std::vector<long long>{0, 2}));
  EXPECT_EQ(mog::parse_index_list("0,2"), (std::vector<long long>{0, 2}));
  EXPECT_EQ(mog::parse_index_list("Answer: [1]"), (std::vector<long long>{1}));
  EXPECT_EQ(mog::parse_index_list("The list is [3,1] here"), (std::vector<long long>{3, 1}));
  EXPECT_TRUE(mog::parse_index_list("[]").empty());
  EXPECT_EQ(mog::parse_index_list("[-1]"), (std::vector<long long>{-1}));
}

TEST(ParseIndexList, RejectedShapes) {
  for (const char* bad : {"none", "", "[0 2]", "[1", "[a]", "[1.5]", "99999999999999999999"}) {
    EXPECT_EQ(error_code_of([&] { mog::parse_index_list(bad); }), ErrorCode::kParseFailure) << bad;
  }
}

TEST(FindCitations, MapsIndicesToUnitIds) {
  const std::vector<MemoryUnit> cands{unit("a", "alpha"), unit("b", "beta"), unit("c", "gamma")};
  auto cite_with = [&](const std::string& response) {
    mog::MockScript script;
    script.set_default(TemplateId::kCitationFinder, response);
    auto w = mogtest::make_world(script);
    return mog::find_citations(*w.gateway, "claim", cands);
  };
  EXPECT_EQ(cite_with("[0,2]"), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(cite_with("[5]"), std::vector<std::string>{});
  EXPECT_EQ(cite_with("[]"), std::vector<std::string>{});
  EXPECT_EQ(cite_with("[1,-1,1,0]"), (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(error_code_of([&] { cite_with("I cannot tell."); }), ErrorCode::kParseFailure);
}

TEST(FindCitations, SourceListIsIndexed) {
  mog::MockScript script;
  script.add(TemplateId::kCitationFinder, {{"claim", "x"}, {"source_list", "[0] alpha\n[1] beta"}}, "[1]");
  script.strict = true;
  auto w = mogtest::make_world(script);
  EXPECT_EQ(mog::find_citations(*w.gateway, "x", {unit("a", "alpha"), unit("b", "beta")}),
            std::vector<std::string>{"b"});
}

TEST(FindCitations, NoCandidatesMeansNoCall) {
  auto w = mogtest::make_world();
  EXPECT_TRUE(mog::find_citations(*w.gateway, "claim", {}).empty());
  EXPECT_EQ(w.chat->calls(), 0u);
}

TEST(ToSentences, ParagraphStartsFollowBlankLines) {
  const auto s = mog::to_sentences("One is here. Two is here.\n\nThree starts anew.\nFour follows.");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].text, "One is here.");
  EXPECT_TRUE(s[0].starts_paragraph);
  EXPECT_FALSE(s[1].starts_paragraph);
  EXPECT_TRUE(s[2].starts_paragraph);
  EXPECT_FALSE(s[3].starts_paragraph);
  EXPECT_TRUE(mog::to_sentences("  ").empty());
}

TEST(NumberReferences, SameSourceSameNumber) {
  mog::Article a;
  a.unit_sources = {{"u1", "d1"}, {"u2", "d2"}, {"u3", "d1"}};
  a.lead = {{"L.", {"u3"}, std::nullopt, true}};
  a.body.sentences = {{"A.", {"u2", "u1"}, std::nullopt, true}, {"B.", {"u1"}, std::nullopt, false}};
  mog::number_references(a, {{"d1", "https://one"}, {"d2", "https://two"}});
  ASSERT_EQ(a.references.size(), 2u);
  EXPECT_EQ(a.references[0], (mog::Reference{1, "d1", "https://one"}));
  EXPECT_EQ(a.references[1], (mog::Reference{2, "d2", "https://two"}));
  EXPECT_EQ(a.reference_number("u1"), a.reference_number("u3"));
  EXPECT_EQ(a.reference_number("u2"), 2);
  EXPECT_EQ(a.reference_number("zz"), std::nullopt);
}

TEST(NumberReferences, Errors) {
  mog::Article a;
  a.unit_sources = {{"u1", "d1"}};
  a.body.sentences = {{"A.", {"u9"}, std::nullopt, true}};
  EXPECT_EQ(error_code_of([&] { mog::number_references(a, {{"d1", "u"}}); }), ErrorCode::kUnknownUnit);
  a.body.sentences[0].citations = {"u1"};
  EXPECT_EQ(error_code_of([&] { mog::number_references(a, {}); }), ErrorCode::kPrecondition);
}

// ---- assembly ----

TEST(AssembleAndCite, SingleLeafHasNoLeadOrHeadings) {
  auto w = mogtest::make_world();
  Fixture f(*w.gateway);
  mog::GenerationStats stats;
  const auto article = mog::assemble_and_cite(f.leaf_outline(), f.store, *w.gateway, f.urls, {}, &stats);
  EXPECT_TRUE(article.lead.empty());
  EXPECT_TRUE(article.body.children.empty());
  EXPECT_EQ(article.body.sentences.size(), 5u);
  EXPECT_EQ(stats.sections_written, 1);
  EXPECT_EQ(stats.sentences, 5);
  EXPECT_EQ(stats.cited_sentences, 5);
  EXPECT_EQ(article.references.size(), 4u);
  const auto text = mog::render(article);
  EXPECT_EQ(text.find("\n#", 0), text.find("\n# References"));
}

TEST(AssembleAndCite, DeepOutlineMirrorsSectionsAndWritesALead) {
  auto w = mogtest::make_world();
  Fixture f(*w.gateway);
  mog::GenerationStats stats;
  const auto article = mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls, {}, &stats);
  EXPECT_EQ(stats.sections_written, 4);
  EXPECT_FALSE(article.lead.empty());
  ASSERT_EQ(article.body.children.size(), 2u);
  const auto& basin = article.body.children[0].children[0];
  EXPECT_EQ(basin.path, "Lake Varn/Geography/Basin");
  EXPECT_EQ(basin.depth, 2);
  EXPECT_EQ(basin.sentences.size(), 2u);
  EXPECT_TRUE(article.body.children[0].sentences.empty());
  for (const auto* s : article.sentences()) EXPECT_FALSE(s->citations.empty()) << s->text;
  // Leaf citations only point at that leaf's units.
  for (const auto& s : basin.sentences)
    for (const auto& id : s.citations) EXPECT_TRUE(id == f.ids.at("depth") || id == f.ids.at("glacier"));
  const auto text = mog::render(article);
  EXPECT_NE(text.find("\n# Geography\n\n## Basin\n\n"), std::string::npos);
}

TEST(AssembleAndCite, AlwaysFirstCandidateCitesEverySentence) {
  mog::MockScript script;
  script.set_default(TemplateId::kCitationFinder, "[0]");
  auto w = mogtest::make_world(script);
  Fixture f(*w.gateway);
  mog::GenerationStats stats;
  const auto article = mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls, {}, &stats);
  EXPECT_GT(stats.sentences, 0);
  EXPECT_EQ(stats.cited_sentences, stats.sentences);
  for (const auto* s : article.sentences()) EXPECT_EQ(s->citations.size(), 1u);
}

TEST(AssembleAndCite, UnparseableCitationsAreCountedAndLeftUncited) {
  mog::MockScript script;
  script.set_default(TemplateId::kCitationFinder, "Cannot decide.");
  auto w = mogtest::make_world(script);
  Fixture f(*w.gateway);
  mog::GenerationStats stats;
  const auto article = mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls, {}, &stats);
  EXPECT_EQ(stats.cited_sentences, 0);
  EXPECT_EQ(stats.citation_parse_failures, stats.sentences);
  EXPECT_TRUE(article.references.empty());
}

TEST(AssembleAndCite, DisablingCitationChangesOnlyBracketsAndReferences) {
  auto w = mogtest::make_world();
  Fixture f(*w.gateway);
  const auto cited = mog::render(mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls));
  mog::GenerationConfig cfg;
  cfg.cite = false;
  const auto plain_article = mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls, cfg);
  const auto plain = mog::render(plain_article);
  EXPECT_TRUE(plain_article.references.empty());
  EXPECT_EQ(plain.find('['), std::string::npos);
  EXPECT_NE(cited, plain);
  EXPECT_EQ(strip_citations(cited), strip_citations(plain));
}

TEST(AssembleAndCite, RefineOffSkipsTheRefiner) {
  auto w = mogtest::make_world();
  Fixture f(*w.gateway);
  mog::GenerationConfig cfg;
  cfg.refine = false;
  mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls, cfg);
  EXPECT_EQ(w.chat->calls(TemplateId::kSectionRefiner), 0u);
  EXPECT_EQ(w.chat->calls(TemplateId::kSectionWriter), 4u);
}

TEST(AssembleAndCite, UnknownUnitNamesTheSection) {
  auto w = mogtest::make_world();
  Fixture f(*w.gateway);
  auto outline = f.deep_outline();
  outline.children[1].assigned_unit_ids.push_back("missing");
  try {
    mog::assemble_and_cite(outline, f.store, *w.gateway, f.urls);
    FAIL() << "expected an error";
  } catch (const mog::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownUnit);
    EXPECT_NE(std::string(e.what()).find("section 'Lake Varn/Culture'"), std::string::npos) << e.what();
  }
}

TEST(AssembleAndCite, Deterministic) {
  auto w = mogtest::make_world();
  Fixture f(*w.gateway);
  const auto a = mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls);
  const auto b = mog::assemble_and_cite(f.deep_outline(), f.store, *w.gateway, f.urls);
  EXPECT_EQ(a, b);
  EXPECT_EQ(mog::render(a), mog::render(b));
}
