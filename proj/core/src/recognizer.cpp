#include "mog/recognizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "mog/error.hpp"
#include "mog/text.hpp"

namespace mog {
namespace {

constexpr std::array<std::string_view, 19> kCalendarWords = {
    "january", "february", "march",  "april",   "may",       "june",     "july",
    "august",  "september", "october", "november", "december", "monday", "tuesday",
    "wednesday", "thursday", "friday", "saturday", "sunday"};

constexpr std::array<std::string_view, 10> kConnectors = {"of", "de", "del", "la", "le", "the",
                                                          "and", "von", "van", "da"};

bool is_calendar_word(std::string_view lower) {
  return std::find(kCalendarWords.begin(), kCalendarWords.end(), lower) != kCalendarWords.end();
}

bool is_connector(std::string_view lower) {
  return std::find(kConnectors.begin(), kConnectors.end(), lower) != kConnectors.end();
}

bool word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80 || c == '-' || c == '\'' || c == '&';
}

struct Token {
  std::size_t begin;
  std::size_t end;
  bool capitalized;
  bool gap_is_space;  // only spaces between the previous token and this one
};

const std::string& month_alt() {
  static const std::string s =
      "(?:Jan(?:uary)?|Feb(?:ruary)?|Mar(?:ch)?|Apr(?:il)?|May|June?|July?|Aug(?:ust)?|"
      "Sep(?:t(?:ember)?)?|Oct(?:ober)?|Nov(?:ember)?|Dec(?:ember)?)";
  return s;
}

const std::vector<std::regex>& numeral_patterns() {
  static const std::vector<std::regex> patterns = [] {
    const std::string m = month_alt();
    const std::string scale = "(?:thousand|million|billion|trillion|[kKmMbB]n?)";
    const std::string amount = R"(\d[\d,]*(?:\.\d+)?)";
    return std::vector<std::regex>{
        // dates
        std::regex(m + R"(\.? \d{1,2}(?:st|nd|rd|th)?,? \d{4})"),
        std::regex(R"(\d{1,2} )" + m + R"( \d{4})"),
        std::regex(m + R"(\.? \d{1,2}(?:st|nd|rd|th)?(?![\d,]))"),
        std::regex(m + R"( \d{4})"),
        std::regex(R"(\d{4}-\d{2}-\d{2})"),
        // currency
        std::regex(R"((?:US\$|\$|€|£|¥|USD ?|EUR ?|GBP ?))" + amount + "(?: ?" + scale + "(?![A-Za-z]))?"),
        std::regex(amount + R"((?: (?:thousand|million|billion|trillion))? (?:dollars|euros|pounds|yen|USD|EUR|GBP)\b)"),
        // percentages
        std::regex(amount + R"( ?(?:%|percent\b|per cent\b))"),
        // scaled
        std::regex(amount + R"( (?:thousand|million|billion|trillion)\b)"),
        // plain numbers
        std::regex(amount + R"((?:st|nd|rd|th)?(?![A-Za-z]))"),
    };
  }();
  return patterns;
}

std::string trim_numeral(std::string s) {
  while (!s.empty() && (s.back() == ',' || s.back() == '.')) s.pop_back();
  return s;
}

}  // namespace

std::string normalize_entity(std::string_view surface) {
  std::string s = text::to_lower(text::normalize_whitespace(surface));
  for (std::string_view suffix : {"'s", "’s"}) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) s.erase(s.size() - suffix.size());
  }
  return s;
}

std::string normalize_numeral(std::string_view surface) {
  std::string out;
  for (const unsigned char c : surface) {
    if (std::isspace(c) != 0 || c == ',') continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<Mention> RuleRecognizer::entities(std::string_view text) const {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t prev_end = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (!word_byte(c) || c == '-' || c == '\'') {
      ++i;
      continue;
    }
    const std::size_t b = i;
    while (i < text.size() && word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t e = i;
    while (e > b && (text[e - 1] == '-' || text[e - 1] == '\'')) --e;
    const std::string_view gap = text.substr(prev_end, b - prev_end);
    const bool spaces = tokens.empty() ? false : std::all_of(gap.begin(), gap.end(), [](char g) { return g == ' '; });
    tokens.push_back({b, e, std::isupper(static_cast<unsigned char>(text[b])) != 0, spaces});
    prev_end = e;
  }

  std::vector<Mention> out;
  std::size_t t = 0;
  while (t < tokens.size()) {
    if (!tokens[t].capitalized) {
      ++t;
      continue;
    }
    std::size_t last = t;  // last capitalized token of the run
    std::size_t j = t + 1;
    while (j < tokens.size() && tokens[j].gap_is_space) {
      const std::string lower = text::to_lower(text.substr(tokens[j].begin, tokens[j].end - tokens[j].begin));
      if (tokens[j].capitalized) {
        last = j;
        ++j;
      } else if (is_connector(lower) && j + 1 < tokens.size() && tokens[j + 1].gap_is_space &&
                 tokens[j + 1].capitalized) {
        ++j;
      } else {
        break;
      }
    }
    std::size_t first = t;
    while (first <= last) {
      const std::string lower =
          text::to_lower(text.substr(tokens[first].begin, tokens[first].end - tokens[first].begin));
      const bool drop = text::is_stopword(lower) || is_calendar_word(lower) || !tokens[first].capitalized;
      if (!drop) break;
      ++first;
    }
    if (first <= last) {
      const std::string_view surface = text.substr(tokens[first].begin, tokens[last].end - tokens[first].begin);
      const bool numeric_only = std::all_of(surface.begin(), surface.end(), [](unsigned char c) {
        return std::isdigit(c) != 0 || c == ' ';
      });
      if (!numeric_only) out.push_back({std::string(surface), normalize_entity(surface), tokens[first].begin});
    }
    t = last + 1;
  }
  return out;
}

std::vector<Mention> RuleRecognizer::numerals(std::string_view text) const {
  std::vector<Mention> out;
  const std::string s(text);
  std::size_t pos = 0;
  while (pos < s.size()) {
    // Only start at a token boundary.
    const bool boundary = pos == 0 || std::isalnum(static_cast<unsigned char>(s[pos - 1])) == 0;
    bool matched = false;
    if (boundary) {
      for (const auto& re : numeral_patterns()) {
        std::smatch m;
        if (std::regex_search(s.cbegin() + static_cast<std::ptrdiff_t>(pos), s.cend(), m, re,
                              std::regex_constants::match_continuous)) {
          std::string surface = trim_numeral(m.str(0));
          if (surface.empty()) continue;
          out.push_back({surface, normalize_numeral(surface), pos});
          pos += surface.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) ++pos;
  }
  return out;
}

MentionSet load_mentions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read mention file '" + path.string() + "'");
  const auto json = nlohmann::json::parse(in, nullptr, false);
  try {
    if (!json.is_object()) throw nlohmann::json::type_error::create(302, "expected an object", nullptr);
    MentionSet set;
    set.entities = json.value("entities", std::vector<std::string>{});
    set.numerals = json.value("numerals", std::vector<std::string>{});
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseFailure, "mention file '" + path.string() + "': " + e.what());
  }
}

MentionSet recognize(const Recognizer& recognizer, std::string_view text) {
  MentionSet set;
  for (auto& m : recognizer.entities(text)) set.entities.push_back(std::move(m.surface));
  for (auto& m : recognizer.numerals(text)) set.numerals.push_back(std::move(m.surface));
  return set;
}

}  // namespace mog
