#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mog/article_io.hpp"
#include "mog/model_gateway.hpp"
#include "mog/recognizer.hpp"

namespace mog {

struct Informativeness {
  int section_count_total = 0;
  int section_count_first_level = 0;
  int word_count = 0;
  int entity_count = 0;
  int numerical_count = 0;
};

// Counts over a rendered article. The References block is not a section and
// its lines are not prose.
Informativeness informativeness(std::string_view rendered, const Recognizer& recognizer);

// Prose of a rendered article: heading lines and the References block
// removed, citation groups stripped, paragraphs separated by blank lines.
std::string article_prose(std::string_view rendered);

std::string strip_citation_groups(std::string_view s);

// Leading "Yes"/"No" (case-insensitive, after an optional "Answer:").
std::optional<bool> parse_judgment(std::string_view completion);

struct SentenceJudgment {
  std::string section;
  std::string text;
  std::vector<std::string> citations;
  std::optional<bool> fully_supported;  // absent for uncited sentences
  std::vector<bool> partially_supported;
  int unparseable = 0;
};

struct CitationMetrics {
  double rate = 0.0;
  std::optional<double> recall;     // null when nothing is cited
  std::optional<double> precision;  // null when nothing is cited
  int sentences = 0;
  int cited_sentences = 0;
  int supported_sentences = 0;
  int pairs = 0;
  int supported_pairs = 0;
  int unparseable_judgments = 0;
  std::vector<SentenceJudgment> per_sentence;
};

// Entailer on each cited sentence against its cited unit texts (joined by
// newlines); PartialEntailer on every (sentence, unit) pair.
CitationMetrics citation_metrics(const Sidecar& sidecar, const ModelGateway& gateway);

struct RougeRecall {
  double rouge1 = 0.0;
  double rougeL = 0.0;
};

// Percent recall of reference unigrams (clipped) and of the LCS length, both
// over lowercase alphanumeric tokens. Throws Error(kEmptyReference).
RougeRecall rouge_recall(std::string_view candidate, std::string_view reference);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Percent of the distinct reference mentions found in the candidate text
// (whole-word match after normalization). Throws Error(kEmptyReference) when
// `reference_mentions` is empty.
double entity_recall(std::string_view candidate, const std::vector<std::string>& reference_mentions);
double numerical_recall(std::string_view candidate, const std::vector<std::string>& reference_mentions,
                        const Recognizer& recognizer);

struct Utilization {
  int collected = 0;
  int cited = 0;
  std::optional<double> rate;  // undefined when nothing was collected
};

// Throws Error(kPrecondition) if a cited source was never collected.
Utilization utilization(const std::set<std::string>& collected, const std::set<std::string>& cited);
Utilization utilization(const Sidecar& sidecar);

// Mean of the defined per-topic rates; nullopt when none is defined.
std::optional<double> macro_average(const std::vector<std::optional<double>>& rates);

struct HeadingCase {
  std::string sentence;
  std::string gold;
  std::vector<std::string> headings;  // includes gold
};

double heading_assignment_precision(const std::vector<HeadingCase>& cases, const ModelGateway& gateway);

struct EvalReport {
  Informativeness info;
  CitationMetrics citation;
  std::optional<double> rouge1_recall;
  std::optional<double> rougeL_recall;
  std::optional<double> entity_recall;
  std::optional<double> numerical_recall;
  bool has_reference = false;
  Utilization utilization;
  std::vector<std::string> notes;
};

nlohmann::json eval_report_to_json(const EvalReport& report);

}  // namespace mog
