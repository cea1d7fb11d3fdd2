#include "mog/html_text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>
#include <vector>

#include "mog/text.hpp"

namespace mog {
namespace {

constexpr std::array<std::string_view, 8> kSkipTags = {
    "script", "style", "nav", "noscript", "template", "svg", "head", "iframe"};

constexpr std::array<std::string_view, 37> kBlockTags = {
    "p",       "div",     "br",     "hr",      "h1",     "h2",         "h3",      "h4",
    "h5",      "h6",      "li",     "ul",      "ol",     "dl",         "dt",      "dd",
    "table",   "tr",      "td",     "th",      "thead",  "tbody",      "section", "article",
    "header",  "footer",  "main",   "aside",   "blockquote", "pre",    "figure",  "figcaption",
    "form",    "address", "body",   "html",    "caption"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view name) {
  return std::find(set.begin(), set.end(), name) != set.end();
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
  std::size_t end = 0;  // index one past '>'
};

// Parses the tag starting at html[pos] == '<'. Returns nullopt-like empty
// name when the '<' does not start a tag.
Tag parse_tag(std::string_view html, std::size_t pos) {
  Tag tag;
  std::size_t i = pos + 1;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  while (i < html.size() && (std::isalnum(static_cast<unsigned char>(html[i])) != 0)) ++i;
  tag.name = text::to_lower(html.substr(name_start, i - name_start));
  char quote = 0;
  while (i < html.size()) {
    const char c = html[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      break;
    }
    ++i;
  }
  tag.end = i < html.size() ? i + 1 : html.size();
  return tag;
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    if (text::iequals(hay.substr(i, needle.size()), needle)) return i;
  }
  return std::string_view::npos;
}

}  // namespace

std::string decode_entities(std::string_view s) {
  static const std::vector<std::pair<std::string_view, std::string_view>> kNamed = {
      {"amp", "&"},       {"lt", "<"},         {"gt", ">"},          {"quot", "\""},
      {"apos", "'"},      {"nbsp", " "},       {"ndash", "–"},  {"mdash", "—"},
      {"hellip", "…"}, {"lsquo", "‘"}, {"rsquo", "’"}, {"ldquo", "“"},
      {"rdquo", "”"}, {"copy", "©"},  {"reg", "®"},    {"deg", "°"},
      {"eacute", "é"}, {"euro", "€"}, {"pound", "£"},  {"middot", "·"},
  };
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    bool done = false;
    if (!name.empty() && name[0] == '#') {
      unsigned long cp = 0;
      bool ok = name.size() > 1;
      const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        const auto c = static_cast<unsigned char>(name[k]);
        if (hex && std::isxdigit(c) != 0) {
          cp = cp * 16 + static_cast<unsigned long>(std::isdigit(c) != 0 ? c - '0' : std::tolower(c) - 'a' + 10);
        } else if (!hex && std::isdigit(c) != 0) {
          cp = cp * 10 + static_cast<unsigned long>(c - '0');
        } else {
          ok = false;
        }
        if (cp > 0x10FFFF) ok = false;
      }
      if (ok && (!hex || name.size() > 2)) {
        append_utf8(out, cp == 0xA0 ? 0x20 : cp);
        done = true;
      }
    } else {
      for (const auto& [n, v] : kNamed) {
        if (n == name) {
          out.append(v);
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool looks_like_html(std::string_view content) {
  std::size_t i = 0;
  while (i < content.size() && std::isspace(static_cast<unsigned char>(content[i])) != 0) ++i;
  if (i < content.size() && content[i] == '<') return true;
  return find_ci(content, "<html", 0) != std::string_view::npos ||
         find_ci(content, "<body", 0) != std::string_view::npos ||
         find_ci(content, "<p>", 0) != std::string_view::npos;
}

PageText html_to_text(std::string_view html) {
  PageText page;
  std::vector<std::string> paragraphs;
  std::string buffer;

  auto flush = [&] {
    std::string para = text::normalize_whitespace(decode_entities(buffer));
    if (!para.empty()) paragraphs.push_back(std::move(para));
    buffer.clear();
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      const std::size_t next = html.find('<', i);
      const std::size_t end = next == std::string_view::npos ? html.size() : next;
      buffer.append(html.substr(i, end - i));
      i = end;
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      const std::size_t close = html.find("-->", i + 4);
      i = close == std::string_view::npos ? html.size() : close + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      const std::size_t close = html.find('>', i);
      i = close == std::string_view::npos ? html.size() : close + 1;
      continue;
    }
    Tag tag = parse_tag(html, i);
    if (tag.name.empty()) {
      buffer.push_back('<');  // stray '<' in text
      ++i;
      continue;
    }
    i = tag.end;
    if (tag.closing) {
      if (contains(kBlockTags, tag.name)) flush();
      continue;
    }
    if (tag.name == "title") {
      const std::size_t close = find_ci(html, "</title", i);
      const std::size_t stop = close == std::string_view::npos ? html.size() : close;
      if (page.title.empty()) page.title = text::normalize_whitespace(decode_entities(html.substr(i, stop - i)));
      i = close == std::string_view::npos ? html.size() : parse_tag(html, close).end;
      continue;
    }
    if (contains(kSkipTags, tag.name)) {
      // head may carry the title; pull it out before skipping the element
      const std::string closing = "</" + tag.name;
      std::size_t close = find_ci(html, closing, i);
      if (tag.name == "head" || tag.name == "nav") {
        // nested same-name elements
        int depth = 1;
        std::size_t scan = i;
        const std::string opening = "<" + tag.name;
        close = std::string_view::npos;
        while (depth > 0) {
          const std::size_t o = find_ci(html, opening, scan);
          const std::size_t c = find_ci(html, closing, scan);
          if (c == std::string_view::npos) break;
          if (o != std::string_view::npos && o < c) {
            ++depth;
            scan = o + opening.size();
          } else {
            if (--depth == 0) close = c;
            scan = c + closing.size();
          }
        }
      }
      const std::size_t stop = close == std::string_view::npos ? html.size() : close;
      if (tag.name == "head" && page.title.empty()) {
        const std::string_view head = html.substr(i, stop - i);
        if (std::size_t t = find_ci(head, "<title", 0); t != std::string_view::npos) {
          const std::size_t body = parse_tag(head, t).end;
          const std::size_t end = find_ci(head, "</title", body);
          page.title = text::normalize_whitespace(
              decode_entities(head.substr(body, (end == std::string_view::npos ? head.size() : end) - body)));
        }
      }
      i = close == std::string_view::npos ? html.size() : parse_tag(html, close).end;
      flush();
      continue;
    }
    if (contains(kBlockTags, tag.name)) flush();
  }
  flush();
  page.text = text::join(paragraphs, "\n\n");
  return page;
}

}  // namespace mog
