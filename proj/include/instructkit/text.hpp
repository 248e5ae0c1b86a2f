#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ik::text {

/// Decodes UTF-8 into code points. Malformed bytes decode to U+FFFD, one per
/// offending byte, so the function never throws.
std::vector<char32_t> decode_utf8(std::string_view s);
std::string encode_utf8(char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);
bool valid_utf8(std::string_view s);

bool is_cjk(char32_t cp);
bool is_space(char32_t cp);

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// How a text is cut into tokens for length and overlap measurements.
enum class TokenUnit {
  whitespace,  // whitespace-delimited runs
  codepoint,   // every non-whitespace code point
  mixed,       // whitespace runs for Latin text, one token per CJK code point
};

const char* to_string(TokenUnit unit);
TokenUnit token_unit_from_string(std::string_view s);

std::vector<std::string> tokenize(std::string_view s, TokenUnit unit = TokenUnit::mixed);
std::size_t count_tokens(std::string_view s, TokenUnit unit = TokenUnit::mixed);

/// Reverses code points; used by the mock translator.
std::string reverse_codepoints(std::string_view s);

}  // namespace ik::text
