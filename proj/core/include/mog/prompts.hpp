#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mog {

enum class TemplateId {
  kExtract,
  kOutliner,
  kOutlineRewriter,
  kOutlineRefiner,
  kSectionWriter,
  kSectionRefiner,
  kCitationFinder,
  kEntailer,
  kPartialEntailer,
  kSummarizer,
  kQueryMaker,
  kSubtopicMaker,
};

inline constexpr std::array<TemplateId, 12> kAllTemplates = {
    TemplateId::kExtract,        TemplateId::kOutliner,        TemplateId::kOutlineRewriter,
    TemplateId::kOutlineRefiner, TemplateId::kSectionWriter,   TemplateId::kSectionRefiner,
    TemplateId::kCitationFinder, TemplateId::kEntailer,        TemplateId::kPartialEntailer,
    TemplateId::kSummarizer,     TemplateId::kQueryMaker,      TemplateId::kSubtopicMaker,
};

// Which model class a template is routed to by default.
enum class ModelTier { kStrong, kFast };

struct PromptTemplate {
  TemplateId id;
  std::string_view name;  // snake_case identifier used in configs and mock scripts
  ModelTier tier;
  bool invented;  // true when no published prompt exists and the text is ours
  std::set<std::string> variables;
  std::string_view body;  // placeholders are written {{name}}
};

const PromptTemplate& prompt_template(TemplateId id);
std::string_view template_name(TemplateId id);
std::optional<TemplateId> template_from_name(std::string_view name);

// Placeholder names appearing in a template body.
std::set<std::string> placeholders(std::string_view body);

// Throws Error(kInvalidConfig) if any template's placeholders differ from its
// documented variable set.
void validate_templates();

// Substitutes every {{name}}; throws Error(kMissingVariable) if one is absent.
std::string render_prompt(const PromptTemplate& tpl,
                          const std::map<std::string, std::string>& variables);

// "- a\n- b": the list layout used for every fact_list-style variable.
std::string format_bullets(const std::vector<std::string>& items);

// "[0] a\n[1] b": candidate sources for the citation finder.
std::string format_indexed(const std::vector<std::string>& items);

// Drops an echoed output-field prefix such as "Fact List:" (any case) from a
// completion, along with surrounding whitespace.
std::string strip_field_prefix(std::string_view completion, std::string_view field);

}  // namespace mog
