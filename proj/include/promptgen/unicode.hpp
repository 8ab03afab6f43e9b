#pragma once

#include <string>
#include <string_view>

namespace promptgen {

/// Decodes UTF-8 into Unicode scalar values. Malformed sequences decode to
/// U+FFFD, one replacement per offending byte.
std::u32string decode_utf8(std::string_view utf8);

std::string encode_utf8(std::u32string_view text);

/// Lowercases ASCII and Latin-1 letters (covers German umlauts); other code
/// points pass through unchanged.
char32_t to_lower(char32_t cp);
std::u32string to_lower(std::u32string_view text);

bool is_space(char32_t cp);

/// Trims leading/trailing whitespace and collapses interior runs to one space.
std::u32string collapse_whitespace(std::u32string_view text);

/// Byte-level trim of ASCII whitespace.
std::string_view trim(std::string_view text);

} // namespace promptgen
