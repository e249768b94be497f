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

#ifndef KEYSUM_TEXT_H_
#define KEYSUM_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 helpers. Every offset exchanged by this library counts Unicode scalar
// values, never bytes.
namespace keysum::text {

// Decodes UTF-8; throws keysum::Error on ill-formed input.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);

// Number of code points in a UTF-8 string.
std::size_t length(std::string_view utf8);

// Code points [start, end) of a UTF-8 string. Throws when out of range.
std::string slice(std::string_view utf8, std::size_t start, std::size_t end);

bool is_alnum(char32_t c);
bool is_mark(char32_t c);
bool is_space(char32_t c);

// Simple (1:1) case folding, so folded strings keep their offsets.
char32_t fold(char32_t c);
std::u32string fold(std::u32string_view s);
std::string fold(std::string_view utf8);

// Case-folds and collapses each whitespace run to one space, trimming ends.
std::u32string normalize_surface(std::u32string_view s);
std::string normalize_surface(std::string_view utf8);

}  // namespace keysum::text

#endif  // KEYSUM_TEXT_H_
