#include "instructkit/text.hpp"

#include <algorithm>

#include "instructkit/error.hpp"

namespace ik::text {

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (ok) {
      // reject overlong forms and surrogates
      static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
    }
    if (!ok) {
      out.push_back(0xFFFD);
      i += 1;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) out += encode_utf8(cp);
  return out;
}

bool valid_utf8(std::string_view s) {
  const auto cps = decode_utf8(s);
  // U+FFFD in the input is legitimate, so compare re-encoded bytes instead
  return encode_utf8(cps) == s;
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||    // unified ideographs
         (cp >= 0x3400 && cp <= 0x4DBF) ||    // extension A
         (cp >= 0x20000 && cp <= 0x2EBEF) ||  // extensions B-F
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // compatibility ideographs
         (cp >= 0x3000 && cp <= 0x303F) ||    // CJK punctuation
         (cp >= 0x3040 && cp <= 0x30FF) ||    // kana
         (cp >= 0xFF00 && cp <= 0xFFEF) ||    // full-width forms
         (cp >= 0xAC00 && cp <= 0xD7AF);      // hangul syllables
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' || cp == '\f' ||
         cp == 0x00A0 || cp == 0x3000 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029;
}

std::string trim(std::string_view s) {
  auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_ws(s[b])) ++b;
  while (e > b && is_ws(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return out;
}

const char* to_string(TokenUnit unit) {
  switch (unit) {
    case TokenUnit::whitespace: return "whitespace";
    case TokenUnit::codepoint: return "codepoint";
    case TokenUnit::mixed: return "mixed";
  }
  return "mixed";
}

TokenUnit token_unit_from_string(std::string_view s) {
  if (s == "whitespace") return TokenUnit::whitespace;
  if (s == "codepoint") return TokenUnit::codepoint;
  if (s == "mixed") return TokenUnit::mixed;
  throw ValidationError("text", "unknown token unit '" + std::string(s) + "'");
}

std::vector<std::string> tokenize(std::string_view s, TokenUnit unit) {
  std::vector<std::string> tokens;
  std::vector<char32_t> run;
  auto flush = [&] {
    if (!run.empty()) {
      tokens.push_back(encode_utf8(run));
      run.clear();
    }
  };
  for (char32_t cp : decode_utf8(s)) {
    if (is_space(cp)) {
      flush();
      continue;
    }
    const bool split_each = unit == TokenUnit::codepoint || (unit == TokenUnit::mixed && is_cjk(cp));
    if (split_each) {
      flush();
      tokens.push_back(encode_utf8(cp));
    } else {
      run.push_back(cp);
    }
  }
  flush();
  return tokens;
}

std::size_t count_tokens(std::string_view s, TokenUnit unit) { return tokenize(s, unit).size(); }

std::string reverse_codepoints(std::string_view s) {
  auto cps = decode_utf8(s);
  std::reverse(cps.begin(), cps.end());
  return encode_utf8(cps);
}

}  // namespace ik::text
