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

#ifndef KEYSUM_CORPUS_H_
#define KEYSUM_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace keysum {

enum class DomainTag { kDialogue, kNews };

enum class CorpusFormat { kDialogSum, kCnnDm, kGeneric };

std::string to_string(DomainTag tag);
std::string to_string(CorpusFormat format);
// Accepts "dialogue"/"news" and "dialogsum_jsonl"/"cnndm_jsonl"/
// "generic_jsonl" respectively; throws keysum::Error otherwise.
DomainTag parse_domain_tag(std::string_view s);
CorpusFormat parse_corpus_format(std::string_view s);

// One source/reference pair.
struct Sample {
  std::string id;
  std::string document;
  std::string summary;  // empty for inference-only corpora
  std::optional<std::string> topic;
  DomainTag domain = DomainTag::kDialogue;
};

// [start_char, end_char) in code points.
struct SentenceSpan {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::size_t index = 0;

  bool operator==(const SentenceSpan &) const = default;
};

struct Token {
  std::string surface;
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::string normalized;  // case-folded surface
};

// Field mappings:
//   dialogsum_jsonl  fname -> id, dialogue -> document, summary, topic
//   cnndm_jsonl      id, article -> document, highlights -> summary
//   generic_jsonl    id, document, summary, topic, domain_tag
// `summary` and `topic` are optional everywhere. Throws ParseError on a
// malformed line or a missing field, and keysum::Error on a duplicate id.
std::vector<Sample> load_corpus(const std::filesystem::path &path,
                                CorpusFormat format);
std::vector<Sample> parse_corpus(std::istream &in, CorpusFormat format,
                                 const std::string &origin = "<stream>");

// Sentence boundaries. Dialogue text is first split into newline-delimited
// turns; inside a turn (or in news text as a whole) a sentence ends at
// [.?!] followed by whitespace, optionally after closing quotes or
// brackets. Spans are trimmed of surrounding whitespace; blank text has no
// sentences.
std::vector<SentenceSpan> segment_sentences(std::string_view text,
                                            DomainTag domain);

// Maximal runs of alphanumerics (with trailing combining marks), joined
// across a single apostrophe between two alphanumerics ("don't").
std::vector<Token> tokenize(std::string_view text);
std::vector<Token> tokenize(std::u32string_view text);

// Length unit used by every statistic: number of tokens.
std::size_t token_length(std::string_view text);

}  // namespace keysum

#endif  // KEYSUM_CORPUS_H_
