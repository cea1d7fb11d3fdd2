#include "mog/prompts.hpp"

#include <cctype>

#include "mog/error.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

// Instruction text of the published prompts is kept word for word; the
// "Follow the following format" scaffolding mirrors how a signature-based
// prompting framework lays out input and output fields.

constexpr std::string_view kExtractBody = R"(Extract atomic facts strictly about a specific topic from the given text.

Guidelines:
1. Be explicit with name entities and time; avoid using pronouns such as "he", "she", "it", "they", or "the...".
2. If the text is not about the topic, return an empty list "[]".

---

Follow the following format.

Topic: Specific topic to extract facts about
Text: Text that may contain information about the topic
Fact List: List of atomic facts strictly about the topic

---

Topic: {{topic}}
Text: {{text}}
Fact List:)";

constexpr std::string_view kOutlinerBody = R"(You are an experienced Wikipedian tasked with creating a general, one-level outline for a Wikipedia article section
Guidelines:
1. Provide only main subsection headings, without any further subdivisions.
2. Ensure comprehensive coverage of key aspects related to the section title.
3. Focus on the most important aspects within the section.
4. Follow Wikipedia's style and naming conventions.

---

Follow the following format.

Section title: ${section_title}
List of the subsection headings: ${outline}

---

Section title: {{section_title}}
List of the subsection headings:)";

constexpr std::string_view kOutlineRewriterBody = R"(You are an experienced Wikipedian tasked with improving an existing one-level outline for a Wikipedia article section.
Guidelines:
1. Provide only main subsection headings, without any further subdivisions.
2. Maintain the original structure of the original outline.
3. Add general headings, and delete unreasonable headings according to the collected information.
4. Focus on the most important aspects within the section.
5. Follow Wikipedia's style and naming conventions.

---

Follow the following format.

Section title: ${section_title}
The information collected: ${information_collected}
Current outline: ${current_outline}
List of the subsection headings: ${outline}

---

Section title: {{section_title}}
The information collected: {{information_collected}}
Current outline: {{current_outline}}
List of the subsection headings:)";

constexpr std::string_view kOutlineRefinerBody = R"(Refine the outline for the Wikipedia page.
1. Remove redundant subsections.
2. Keep all the sections.
3. Do not add any new section.

---

Follow the following format.

Outline: ${outline}
Refined outline: ${refined_outline}

---

Outline: {{outline}}
Refined outline:)";

constexpr std::string_view kSectionWriterBody = R"(Write a Wikipedia section based on atomic facts. Do not improvise with any other information.
1. Do not include section name as output.
2. Ensure the section is split into multiple coherent paragraphs if necessary.
3. The sequence of facts must be adjusted for coherence and readability.
4. Stay focused within the section title, only include facts related to the section title.

---

Follow the following format.

Topic: ${topic}
Section title: ${section_name}
Atomic facts: ${fact_list}
Section content: ${content}

---

Topic: {{topic}}
Section title: {{section_name}}
Atomic facts: {{fact_list}}
Section content:)";

constexpr std::string_view kSectionRefinerBody = R"(Refine the section of the given topic while keeping the markdown section headings unchanged.
Stay focus on the section, remove unnecessary information about the section, and improve the coherence and writing.
Only output the refined text, no other information.

---

Follow the following format.

Topic: Topic of the text
Text: Text to refine
Refined Text: Refined text

---

Topic: {{topic}}
Text: {{text}}
Refined Text:)";

constexpr std::string_view kCitationFinderBody = R"(Given a sentence and a source list, only cite the most relevant sources to fully cover the sentence.
The output should be a list of indices of the sources in the input list.

---

Follow the following format.

Claim: ${claim}
Source List: a list of source text
Answer: the indices of the most relevant source text, reply only the indices

---

Claim: {{claim}}
Source List: {{source_list}}
Answer:)";

constexpr std::string_view kEntailerBody = R"(Is the claim faithful to the source? A claim is faithful to the source if the core part in the claim can be supported by the source.
Start your answer with 'Yes' or 'No'.

---

Follow the following format.

Source: ${source}
Claim: ${claim}
Answer: reply only 'Yes' or 'No'

---

Source: {{source}}
Claim: {{claim}}
Answer:)";

constexpr std::string_view kPartialEntailerBody = R"(Can the source at least partially support the claim?
Start your answer with 'Yes' or 'No'.

---

Follow the following format.

Source: ${source}
Claim: ${claim}
Answer: reply only 'Yes' or 'No'

---

Source: {{source}}
Claim: {{claim}}
Answer:)";

// The three templates below have no published wording; the text is our own.

constexpr std::string_view kSummarizerBody = R"(Summarize the following atomic facts about a topic into one concise paragraph.
Keep names, dates and numbers; do not add information that is not in the facts.

---

Follow the following format.

Topic: ${topic}
Atomic facts: ${fact_list}
Summary: ${summary}

---

Topic: {{topic}}
Atomic facts: {{fact_list}}
Summary:)";

constexpr std::string_view kQueryMakerBody = R"(Write web search queries that would find encyclopedic information about the topic.
Each query must be different from the topic itself. Output one query per line, nothing else.

---

Topic: {{topic}}
Number of queries: {{count}}
Queries:)";

constexpr std::string_view kSubtopicMakerBody = R"(You are exploring a topic to collect material for a Wikipedia article.
Based on the summary of the information collected so far, propose subtopics that deserve their own web search.
Each subtopic must mention the main topic explicitly. Output one subtopic per line, nothing else.

---

Main topic: {{topic}}
Current subtopic: {{subtopic}}
Summary of collected information: {{summary}}
Number of subtopics: {{count}}
Subtopics:)";

const std::array<PromptTemplate, 12>& registry() {
  static const std::array<PromptTemplate, 12> kRegistry = {{
      {TemplateId::kExtract, "extract", ModelTier::kFast, false, {"topic", "text"}, kExtractBody},
      {TemplateId::kOutliner, "outliner", ModelTier::kStrong, false, {"section_title"}, kOutlinerBody},
      {TemplateId::kOutlineRewriter, "outline_rewriter", ModelTier::kStrong, false,
       {"section_title", "information_collected", "current_outline"}, kOutlineRewriterBody},
      {TemplateId::kOutlineRefiner, "outline_refiner", ModelTier::kStrong, false, {"outline"},
       kOutlineRefinerBody},
      {TemplateId::kSectionWriter, "section_writer", ModelTier::kStrong, false,
       {"topic", "section_name", "fact_list"}, kSectionWriterBody},
      {TemplateId::kSectionRefiner, "section_refiner", ModelTier::kStrong, false, {"topic", "text"},
       kSectionRefinerBody},
      {TemplateId::kCitationFinder, "citation_finder", ModelTier::kFast, false,
       {"claim", "source_list"}, kCitationFinderBody},
      {TemplateId::kEntailer, "entailer", ModelTier::kFast, false, {"source", "claim"}, kEntailerBody},
      {TemplateId::kPartialEntailer, "partial_entailer", ModelTier::kFast, false, {"source", "claim"},
       kPartialEntailerBody},
      {TemplateId::kSummarizer, "summarizer", ModelTier::kFast, true, {"topic", "fact_list"},
       kSummarizerBody},
      {TemplateId::kQueryMaker, "query_maker", ModelTier::kFast, true, {"topic", "count"},
       kQueryMakerBody},
      {TemplateId::kSubtopicMaker, "subtopic_maker", ModelTier::kFast, true,
       {"topic", "subtopic", "summary", "count"}, kSubtopicMakerBody},
  }};
  return kRegistry;
}

bool is_name_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

const PromptTemplate& prompt_template(TemplateId id) {
  for (const auto& t : registry()) {
    if (t.id == id) return t;
  }
  throw Error(ErrorCode::kPrecondition, "unregistered template id");
}

std::string_view template_name(TemplateId id) { return prompt_template(id).name; }

std::optional<TemplateId> template_from_name(std::string_view name) {
  for (const auto& t : registry()) {
    if (t.name == name) return t.id;
  }
  return std::nullopt;
}

std::set<std::string> placeholders(std::string_view body) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while ((pos = body.find("{{", pos)) != std::string_view::npos) {
    std::size_t end = pos + 2;
    while (end < body.size() && is_name_char(body[end])) ++end;
    if (end + 1 < body.size() && body.compare(end, 2, "}}") == 0 && end > pos + 2) {
      out.emplace(body.substr(pos + 2, end - pos - 2));
      pos = end + 2;
    } else {
      pos += 2;
    }
  }
  return out;
}

void validate_templates() {
  for (const auto& t : registry()) {
    if (placeholders(t.body) != t.variables) {
      throw Error(ErrorCode::kInvalidConfig,
                  "template '" + std::string(t.name) + "' placeholders differ from its variable set");
    }
  }
}

std::string render_prompt(const PromptTemplate& tpl,
                          const std::map<std::string, std::string>& variables) {
  for (const auto& v : tpl.variables) {
    if (!variables.contains(v)) {
      throw Error(ErrorCode::kMissingVariable,
                  "template '" + std::string(tpl.name) + "' requires variable '" + v + "'");
    }
  }
  std::string out;
  out.reserve(tpl.body.size() + 256);
  std::string_view body = tpl.body;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t open = body.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    out.append(body.substr(pos, open - pos));
    std::size_t end = open + 2;
    while (end < body.size() && is_name_char(body[end])) ++end;
    if (end > open + 2 && end + 1 < body.size() && body.compare(end, 2, "}}") == 0) {
      out.append(variables.at(std::string(body.substr(open + 2, end - open - 2))));
      pos = end + 2;
    } else {
      out.append("{{");
      pos = open + 2;
    }
  }
  return out;
}

std::string format_bullets(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out.push_back('\n');
    out += "- ";
    out += item;
  }
  return out;
}

std::string format_indexed(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += "[" + std::to_string(i) + "] " + items[i];
  }
  return out;
}

std::string strip_field_prefix(std::string_view completion, std::string_view field) {
  std::string s = text::trim(completion);
  const std::string head = std::string(field) + ":";
  if (s.size() >= head.size() && text::iequals(std::string_view(s).substr(0, head.size()), head)) {
    s = text::trim(std::string_view(s).substr(head.size()));
  }
  return s;
}

}  // namespace mog
