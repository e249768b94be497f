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

#include "keysum/corpus.h"

#include <unordered_set>

#include "keysum/error.h"
#include "keysum/jsonl.h"
#include "keysum/text.h"

namespace keysum {

std::string to_string(DomainTag tag) {
  return tag == DomainTag::kDialogue ? "dialogue" : "news";
}

std::string to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kDialogSum:
      return "dialogsum_jsonl";
    case CorpusFormat::kCnnDm:
      return "cnndm_jsonl";
    case CorpusFormat::kGeneric:
      return "generic_jsonl";
  }
  return "";
}

DomainTag parse_domain_tag(std::string_view s) {
  if (s == "dialogue") return DomainTag::kDialogue;
  if (s == "news") return DomainTag::kNews;
  throw Error("unknown domain tag '" + std::string(s) + "'");
}

CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "dialogsum_jsonl" || s == "dialogsum") return CorpusFormat::kDialogSum;
  if (s == "cnndm_jsonl" || s == "cnndm") return CorpusFormat::kCnnDm;
  if (s == "generic_jsonl" || s == "generic") return CorpusFormat::kGeneric;
  throw Error("unknown corpus format '" + std::string(s) + "'");
}

namespace {

Sample decode_sample(const jsonl::Record &r, CorpusFormat format) {
  Sample s;
  switch (format) {
    case CorpusFormat::kDialogSum:
      s.id = r.string("fname");
      s.document = r.string("dialogue");
      s.summary = r.optional_string("summary").value_or("");
      s.topic = r.optional_string("topic");
      s.domain = DomainTag::kDialogue;
      break;
    case CorpusFormat::kCnnDm:
      s.id = r.string("id");
      s.document = r.string("article");
      s.summary = r.optional_string("highlights").value_or("");
      s.domain = DomainTag::kNews;
      break;
    case CorpusFormat::kGeneric: {
      s.id = r.string("id");
      s.document = r.string("document");
      s.summary = r.optional_string("summary").value_or("");
      s.topic = r.optional_string("topic");
      auto tag = r.optional_string("domain_tag");
      try {
        s.domain = tag ? parse_domain_tag(*tag) : DomainTag::kNews;
      } catch (const Error &e) {
        r.fail("domain_tag", e.what());
      }
      break;
    }
  }
  const char *id_field = format == CorpusFormat::kDialogSum ? "fname" : "id";
  const char *doc_field = format == CorpusFormat::kDialogSum ? "dialogue"
                          : format == CorpusFormat::kCnnDm   ? "article"
                                                             : "document";
  if (s.id.empty()) r.fail(id_field, "must be nonempty");
  if (s.document.empty()) r.fail(doc_field, "must be nonempty");
  try {
    text::to_u32(s.document);
    text::to_u32(s.summary);
  } catch (const Error &e) {
    r.fail(doc_field, e.what());
  }
  return s;
}

}  // namespace

std::vector<Sample> parse_corpus(std::istream &in, CorpusFormat format,
                                 const std::string &origin) {
  std::vector<Sample> samples;
  std::unordered_set<std::string> seen;
  jsonl::read(in, origin, [&](const jsonl::Record &r) {
    Sample s = decode_sample(r, format);
    if (!seen.insert(s.id).second) {
      throw Error(origin + ":" + std::to_string(r.line) + ": duplicate id '" +
                  s.id + "'");
    }
    samples.push_back(std::move(s));
  });
  return samples;
}

std::vector<Sample> load_corpus(const std::filesystem::path &path,
                                CorpusFormat format) {
  std::ifstream in = jsonl::open_input(path);
  return parse_corpus(in, format, path.string());
}

namespace {

bool is_terminator(char32_t c) { return c == U'.' || c == U'?' || c == U'!'; }

bool is_closer(char32_t c) {
  switch (c) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case U'}':
    case U'’':
    case U'”':
    case U'»':
      return true;
    default:
      return false;
  }
}

void emit_trimmed(const std::u32string &s, std::size_t begin, std::size_t end,
                  std::vector<SentenceSpan> &out) {
  while (begin < end && text::is_space(s[begin])) ++begin;
  while (end > begin && text::is_space(s[end - 1])) --end;
  if (begin < end) out.push_back({begin, end, out.size()});
}

void split_region(const std::u32string &s, std::size_t begin, std::size_t end,
                  std::vector<SentenceSpan> &out) {
  std::size_t start = begin;
  for (std::size_t i = begin; i < end; ++i) {
    if (!is_terminator(s[i])) continue;
    std::size_t j = i + 1;
    while (j < end && is_terminator(s[j])) ++j;
    while (j < end && is_closer(s[j])) ++j;
    if (j == end || text::is_space(s[j])) {
      emit_trimmed(s, start, j, out);
      start = j;
    }
    i = j - 1;
  }
  emit_trimmed(s, start, end, out);
}

}  // namespace

std::vector<SentenceSpan> segment_sentences(std::string_view utf8,
                                            DomainTag domain) {
  const std::u32string s = text::to_u32(utf8);
  std::vector<SentenceSpan> out;
  if (domain == DomainTag::kNews) {
    split_region(s, 0, s.size(), out);
    return out;
  }
  std::size_t turn = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == U'\n') {
      split_region(s, turn, i, out);
      turn = i + 1;
    }
  }
  return out;
}

namespace {

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

}  // namespace

std::vector<Token> tokenize(std::u32string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!text::is_alnum(s[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < s.size()) {
      if (text::is_alnum(s[i]) || text::is_mark(s[i])) {
        ++i;
      } else if (is_apostrophe(s[i]) && i + 1 < s.size() &&
                 text::is_alnum(s[i + 1])) {
        i += 2;
      } else {
        break;
      }
    }
    std::u32string_view surface = s.substr(start, i - start);
    out.push_back(Token{text::to_utf8(surface), start, i,
                        text::to_utf8(text::fold(surface))});
  }
  return out;
}

std::vector<Token> tokenize(std::string_view utf8) {
  return tokenize(text::to_u32(utf8));
}

std::size_t token_length(std::string_view utf8) {
  return tokenize(utf8).size();
}

}  // namespace keysum
