#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by every stage.
namespace mog::text {

std::string trim(std::string_view s);

// Trim and collapse every internal whitespace run to one space. Case is kept.
std::string normalize_whitespace(std::string_view s);

std::string to_lower(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

// Lowercased alphanumeric tokens; any other byte is a separator. Bytes >= 0x80
// are treated as word characters so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view s);

// tokenize() minus English function words.
std::vector<std::string> content_tokens(std::string_view s);

bool is_stopword(std::string_view lower_token);

std::vector<std::string> split_lines(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// "Lake Varn: Music & Arts" -> "lake-varn-music-arts"
std::string slugify(std::string_view s);

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0);

// Remove list decorations from a model-produced line: bullets, numbering,
// markdown heading markers, wrapping quotes and a trailing colon.
std::string strip_list_marker(std::string_view line);

}  // namespace mog::text
