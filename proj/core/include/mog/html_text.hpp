#pragma once

#include <string>
#include <string_view>

namespace mog {

struct PageText {
  std::string title;
  std::string text;  // paragraphs separated by "\n\n"
};

// Minimal tag stripper. Drops script, style, nav, noscript, template, svg and
// head content; block-level tags become paragraph breaks; inline tags vanish;
// character references are decoded; whitespace inside a paragraph collapses.
PageText html_to_text(std::string_view html);

bool looks_like_html(std::string_view content);

// Decodes named (common subset) and numeric character references.
std::string decode_entities(std::string_view s);

}  // namespace mog
