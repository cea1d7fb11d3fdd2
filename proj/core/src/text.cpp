#include "mog/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace mog::text {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

constexpr std::string_view kStopwords[] = {
    "a",     "about", "above",  "after",  "again", "against", "all",   "also",   "am",
    "an",    "and",   "any",    "are",    "as",    "at",      "be",    "because", "been",
    "before", "being", "below", "between", "both", "but",     "by",    "can",    "could",
    "did",   "do",    "does",   "doing",  "down",  "during",  "each",  "few",    "for",
    "from",  "further", "had",  "has",    "have",  "having",  "he",    "her",    "here",
    "hers",  "him",   "his",    "how",    "i",     "if",      "in",    "into",   "is",
    "it",    "its",   "itself", "just",   "may",   "me",      "more",  "most",   "my",
    "no",    "nor",   "not",    "now",    "of",    "off",     "on",    "once",   "only",
    "or",    "other", "our",    "ours",   "out",   "over",    "own",   "same",   "she",
    "should", "so",   "some",   "such",   "than",  "that",    "the",   "their",  "theirs",
    "them",  "then",  "there",  "these",  "they",  "this",    "those", "through", "to",
    "too",   "under", "until",  "up",     "very",  "was",     "we",    "were",   "what",
    "when",  "where", "which",  "while",  "who",   "whom",    "why",   "will",   "with",
    "would", "you",   "your",   "yours",  "s",     "t",       "one",   "many",   "within",
    "across", "among", "upon",  "via",    "since", "per",     "yet",   "onto",   "several",
    "however", "although",
};

}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : s) {
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_stopword(std::string_view lower_token) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), lower_token) != std::end(kStopwords);
}

std::vector<std::string> content_tokens(std::string_view s) {
  auto tokens = tokenize(s);
  std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  return tokens;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t nl = s.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? s.size() : nl;
    std::string_view line = s.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string slugify(std::string_view s) {
  return join(tokenize(s), "-");
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string strip_list_marker(std::string_view line) {
  std::string s = trim(line);
  // markdown heading markers and bullets
  std::size_t i = 0;
  while (i < s.size() && (s[i] == '#' || s[i] == '-' || s[i] == '*' || s[i] == '+' ||
                          s[i] == ' ' || s[i] == '\t')) {
    ++i;
  }
  s.erase(0, i);
  // "1." / "2)" / "3 -" numbering
  std::size_t d = 0;
  while (d < s.size() && std::isdigit(static_cast<unsigned char>(s[d])) != 0) ++d;
  if (d > 0 && d < s.size() && (s[d] == '.' || s[d] == ')')) {
    s.erase(0, d + 1);
  }
  s = trim(s);
  while (!s.empty() && (s.back() == ':' || s.back() == ',')) s.pop_back();
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    s = trim(std::string_view(s).substr(1, s.size() - 2));
    while (!s.empty() && (s.back() == ':' || s.back() == ',')) s.pop_back();
  }
  return trim(s);
}

}  // namespace mog::text
