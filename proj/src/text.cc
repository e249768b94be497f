// Copyright 2026 The keysum Authors.
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

#include "keysum/text.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "keysum/error.h"

namespace keysum::text {

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto *s = reinterpret_cast<const uint8_t *>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) {
      throw Error("ill-formed UTF-8 at byte " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool error = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) throw Error("cannot encode code point as UTF-8");
    out.append(reinterpret_cast<const char *>(buf), len);
  }
  return out;
}

std::size_t length(std::string_view utf8) { return to_u32(utf8).size(); }

std::string slice(std::string_view utf8, std::size_t start, std::size_t end) {
  const std::u32string cps = to_u32(utf8);
  if (start > end || end > cps.size()) {
    throw Error("slice [" + std::to_string(start) + ", " +
                std::to_string(end) + ") out of range for length " +
                std::to_string(cps.size()));
  }
  return to_utf8(std::u32string_view(cps).substr(start, end - start));
}

bool is_alnum(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }

bool is_mark(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

char32_t fold(char32_t c) {
  return static_cast<char32_t>(
      u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
}

std::u32string fold(std::u32string_view s) {
  std::u32string out(s);
  for (char32_t &c : out) c = fold(c);
  return out;
}

std::string fold(std::string_view utf8) { return to_utf8(fold(to_u32(utf8))); }

std::u32string normalize_surface(std::u32string_view s) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(fold(c));
  }
  return out;
}

std::string normalize_surface(std::string_view utf8) {
  return to_utf8(normalize_surface(to_u32(utf8)));
}

}  // namespace keysum::text
