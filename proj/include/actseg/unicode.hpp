// Copyright 2026 The actseg Authors
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

// UTF-8 text normalization backed by ICU.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include "actseg/error.hpp"

namespace actseg::text {

namespace detail {

inline icu::UnicodeString from_utf8(std::string_view s) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

inline std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

inline const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  return *n;
}

inline const icu::Normalizer2& nfd_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFD unavailable: ") + u_errorName(status));
  return *n;
}

inline icu::UnicodeString normalize(const icu::Normalizer2& n, const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = n.normalize(s, status);
  if (U_FAILURE(status)) throw Error(std::string("normalization failed: ") + u_errorName(status));
  return out;
}

}  // namespace detail

inline bool is_valid_utf8(std::string_view s) {
  // fromUTF8 substitutes U+FFFD for malformed input; a round trip exposes it.
  return detail::to_utf8(detail::from_utf8(s)) == s;
}

// Unicode NFC.
inline std::string nfc(std::string_view s) {
  return detail::to_utf8(detail::normalize(detail::nfc_instance(), detail::from_utf8(s)));
}

// Lowercased, accent-stripped NFC text: "Grâce" -> "grace".
inline std::string fold(std::string_view s) {
  const icu::UnicodeString decomposed = detail::normalize(detail::nfd_instance(), detail::from_utf8(s));
  icu::UnicodeString stripped;
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    if (u_charType(c) != U_NON_SPACING_MARK) stripped.append(c);
    i += U16_LENGTH(c);
  }
  stripped.toLower(icu::Locale::getRoot());
  return detail::to_utf8(detail::normalize(detail::nfc_instance(), stripped));
}

inline std::u32string code_points(std::string_view s) {
  const icu::UnicodeString u = detail::from_utf8(s);
  std::u32string out;
  out.reserve(static_cast<std::size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

inline std::string from_code_points(std::u32string_view cps) {
  icu::UnicodeString u;
  for (char32_t c : cps) u.append(static_cast<UChar32>(c));
  return detail::to_utf8(u);
}

inline bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
inline bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }
inline bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

// Whitespace-separated tokens, with no other processing.
inline std::vector<std::u32string> split_whitespace(std::u32string_view s) {
  std::vector<std::u32string> tokens;
  std::u32string current;
  for (char32_t c : s) {
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Runs of whitespace become one ASCII space; ends are trimmed.
inline std::string collapse_whitespace(std::string_view s) {
  std::u32string out;
  for (const auto& token : split_whitespace(code_points(s))) {
    if (!out.empty()) out.push_back(U' ');
    out += token;
  }
  return from_code_points(out);
}

}  // namespace actseg::text
