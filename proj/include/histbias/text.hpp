// Copyright 2026 The histbias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal UTF-8 helpers: code point decoding, whitespace and punctuation
// classes, and lowercasing for ASCII and Latin-1. Invalid byte sequences are
// decoded one byte at a time as U+FFFD so that scanning always advances.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace histbias::text {

inline constexpr char32_t kReplacementChar = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed, always >= 1
};

inline Decoded DecodeAt(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kReplacementChar, 1};
  }
  if (pos + len > s.size()) return {kReplacementChar, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kReplacementChar, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

// Start offset of the code point that ends right before `pos` (pos > 0).
inline std::size_t PrevStart(std::string_view s, std::size_t pos) {
  std::size_t p = pos - 1;
  while (p > 0 && pos - p < 4 &&
         (static_cast<unsigned char>(s[p]) & 0xC0) == 0x80) {
    --p;
  }
  return p;
}

inline void AppendUtf8(std::string& out, char32_t cp) {
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
}

// White_Space property.
inline bool IsSpace(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

// ASCII punctuation plus the Latin-1 and General Punctuation blocks that
// show up in OCR output (curly quotes, dashes, ellipsis, guillemets).
inline bool IsPunct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
    case 0xBF:
      return true;
    default:
      break;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x3003);
}

inline bool IsApostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

// Characters that belong to a word for matching purposes. Apostrophes stay
// inside words ("o'clock", "hon'ble").
inline bool IsWordChar(char32_t cp) {
  if (IsSpace(cp)) return false;
  if (IsPunct(cp)) return IsApostrophe(cp);
  return true;
}

inline char32_t ToLower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

inline std::string Lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto d = DecodeAt(s, i);
    if (d.cp < 0x80) {
      out.push_back(static_cast<char>(ToLower(d.cp)));
    } else if (d.cp == kReplacementChar) {
      out.append(s.substr(i, d.length));
    } else {
      AppendUtf8(out, ToLower(d.cp));
    }
    i += d.length;
  }
  return out;
}

inline std::string_view Trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size()) {
    const auto d = DecodeAt(s, b);
    if (!IsSpace(d.cp)) break;
    b += d.length;
  }
  std::size_t e = s.size();
  while (e > b) {
    const std::size_t p = PrevStart(s, e);
    if (!IsSpace(DecodeAt(s, p).cp)) break;
    e = p;
  }
  return s.substr(b, e - b);
}

// Code points of `s` as separate UTF-8 strings.
inline std::vector<std::string> SplitCodePoints(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto d = DecodeAt(s, i);
    out.emplace_back(s.substr(i, d.length));
    i += d.length;
  }
  return out;
}

inline std::vector<std::string_view> SplitFields(std::string_view line,
                                                 char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = line.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, p - start));
    start = p + 1;
  }
}

}  // namespace histbias::text
