#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mog {

// Sentences plus the exact whitespace around them, so that
// separators[0] + sentences[0] + separators[1] + ... + separators[n]
// reproduces the input byte for byte.
struct Segmentation {
  std::vector<std::string> sentences;
  std::vector<std::string> separators;  // sentences.size() + 1 entries

  std::string reconstruct() const;
};

// Rule-based splitter: a boundary follows '.', '!' or '?' (plus any closing
// quotes or brackets) when whitespace and then an uppercase letter, digit or
// opening quote come next, unless the token ending in '.' is a known
// abbreviation or an initial. A blank line is always a boundary.
Segmentation segment(std::string_view text);

std::vector<std::string> segment_sentences(std::string_view text);

// `token` includes its trailing '.', e.g. "Dr." or "U.S.".
bool is_abbreviation(std::string_view token);

}  // namespace mog
