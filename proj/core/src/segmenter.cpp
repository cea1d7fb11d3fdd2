#include "mog/segmenter.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace mog {
namespace {

constexpr std::array<std::string_view, 58> kAbbreviations = {
    "Dr.",   "Mr.",   "Mrs.",  "Ms.",   "Prof.", "Sr.",   "Jr.",   "St.",   "Mt.",   "Ft.",
    "Gen.",  "Col.",  "Capt.", "Lt.",   "Sgt.",  "Gov.",  "Sen.",  "Rep.",  "Rev.",  "Hon.",
    "U.S.",  "U.K.",  "U.N.",  "E.U.",  "No.",   "Nos.",  "no.",   "vs.",   "etc.",  "e.g.",
    "i.e.",  "cf.",   "al.",   "approx.", "Inc.", "Ltd.", "Co.",   "Corp.", "Bros.", "Fig.",
    "Vol.",  "vol.",  "pp.",   "p.",    "Jan.",  "Feb.",  "Mar.",  "Apr.",  "Jun.",  "Jul.",
    "Aug.",  "Sep.",  "Sept.", "Oct.",  "Nov.",  "Dec.",  "ca.",   "Ave.",
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of a closing quote/bracket at `pos`, 0 if none. Handles the UTF-8
// right double and single quotation marks.
std::size_t closer_at(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (s.compare(pos, 3, "\xE2\x80\x9D") == 0 || s.compare(pos, 3, "\xE2\x80\x99") == 0) return 3;
  return 0;
}

bool starts_sentence(std::string_view s, std::size_t pos) {
  const auto c = static_cast<unsigned char>(s[pos]);
  if (std::isupper(c) != 0 || std::isdigit(c) != 0 || c >= 0x80) return true;
  if (c == '"' || c == '\'' || c == '(' || c == '[') {
    return pos + 1 < s.size() && starts_sentence(s, pos + 1);
  }
  return false;
}

// The whitespace-delimited token ending at `dot` (inclusive), minus leading
// opening punctuation.
std::string_view token_ending_at(std::string_view s, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !is_space(s[b - 1])) --b;
  while (b < dot && (s[b] == '(' || s[b] == '"' || s[b] == '\'' || s[b] == '[')) ++b;
  return s.substr(b, dot - b + 1);
}

}  // namespace

bool is_abbreviation(std::string_view token) {
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), token) != kAbbreviations.end()) {
    return true;
  }
  // A single capital initial: "J."
  if (token.size() == 2 && std::isupper(static_cast<unsigned char>(token[0])) != 0) return true;
  // Dotted initialisms: "A.B.", "D.C."
  if (token.size() >= 4 && token.size() % 2 == 0) {
    bool dotted = true;
    for (std::size_t i = 0; i < token.size(); i += 2) {
      if (std::isalpha(static_cast<unsigned char>(token[i])) == 0 || token[i + 1] != '.') {
        dotted = false;
        break;
      }
    }
    if (dotted) return true;
  }
  return false;
}

std::string Segmentation::reconstruct() const {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    out += separators[i];
    out += sentences[i];
  }
  if (!separators.empty()) out += separators.back();
  return out;
}

Segmentation segment(std::string_view s) {
  Segmentation seg;
  const std::size_t n = s.size();
  std::size_t start = 0;
  while (start < n && is_space(s[start])) ++start;
  seg.separators.emplace_back(s.substr(0, start));
  if (start == n) return seg;

  auto close = [&](std::size_t end, std::size_t next) {
    seg.sentences.emplace_back(s.substr(start, end - start));
    seg.separators.emplace_back(s.substr(end, next - end));
    start = next;
  };

  std::size_t p = start;
  while (p < n) {
    if (is_space(s[p])) {
      // blank line => paragraph boundary
      std::size_t q = p;
      int newlines = 0;
      while (q < n && is_space(s[q])) {
        if (s[q] == '\n') ++newlines;
        ++q;
      }
      if (newlines >= 2 && q < n && p > start) {
        close(p, q);
        p = q;
        continue;
      }
      p = q;
      continue;
    }
    if (!is_terminal(s[p])) {
      ++p;
      continue;
    }
    std::size_t end = p + 1;
    while (end < n && is_terminal(s[end])) ++end;
    while (end < n) {
      const std::size_t len = closer_at(s, end);
      if (len == 0) break;
      end += len;
    }
    if (end >= n) break;
    if (!is_space(s[end])) {
      p = end;
      continue;
    }
    std::size_t q = end;
    while (q < n && is_space(s[q])) ++q;
    if (q == n) break;
    const bool abbreviation = s[p] == '.' && end == p + 1 && is_abbreviation(token_ending_at(s, p));
    const bool blank_line = std::count(s.begin() + static_cast<std::ptrdiff_t>(end),
                                       s.begin() + static_cast<std::ptrdiff_t>(q), '\n') >= 2;
    if (blank_line || (!abbreviation && starts_sentence(s, q))) {
      close(end, q);
    }
    p = q;
  }

  // trailing sentence and whitespace
  std::size_t e = n;
  while (e > start && is_space(s[e - 1])) --e;
  if (e > start) {
    seg.sentences.emplace_back(s.substr(start, e - start));
    seg.separators.emplace_back(s.substr(e));
  } else {
    seg.separators.back() += std::string(s.substr(start));
  }
  return seg;
}

std::vector<std::string> segment_sentences(std::string_view text) {
  return segment(text).sentences;
}

}  // namespace mog
