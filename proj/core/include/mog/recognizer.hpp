#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mog {

struct Mention {
  std::string surface;
  std::string normalized;
  std::size_t offset = 0;  // byte offset of surface in the scanned text
};

class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::vector<Mention> entities(std::string_view text) const = 0;
  virtual std::vector<Mention> numerals(std::string_view text) const = 0;
};

// Entities: runs of capitalized tokens, allowing lowercase connectors (of,
// de, the, and, ...) between two capitalized tokens. Leading capitalized
// function words, month names and weekdays are dropped from a run.
//
// Numerals, tried in this order at each position (first match wins, matched
// text is consumed):
//   1. dates       "May 5, 2023", "5 May 2023", "May 2023", "2023-05-05"
//   2. currency    "$30 million", "€4.5bn", "12 dollars"
//   3. percentages "45%", "3.5 percent"
//   4. scaled      "2.1 million"
//   5. numbers     "1,200", "3.14", "21st"
class RuleRecognizer final : public Recognizer {
 public:
  std::vector<Mention> entities(std::string_view text) const override;
  std::vector<Mention> numerals(std::string_view text) const override;
};

std::string normalize_entity(std::string_view surface);
std::string normalize_numeral(std::string_view surface);

// Externally produced mentions: {"entities": [...], "numerals": [...]}.
struct MentionSet {
  std::vector<std::string> entities;
  std::vector<std::string> numerals;
};

MentionSet load_mentions(const std::filesystem::path& path);
MentionSet recognize(const Recognizer& recognizer, std::string_view text);

}  // namespace mog
