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

#include "keysum/entity_io.h"

#include <algorithm>
#include <array>
#include <map>
#include <ostream>

#include "keysum/error.h"
#include "keysum/jsonl.h"
#include "keysum/text.h"

namespace keysum {

std::string to_string(EntityRole role) {
  switch (role) {
    case EntityRole::kDocument:
      return "document";
    case EntityRole::kSummary:
      return "summary";
    case EntityRole::kCandidate:
      return "candidate";
  }
  return "";
}

EntityRole parse_entity_role(std::string_view s) {
  if (s == "document") return EntityRole::kDocument;
  if (s == "summary") return EntityRole::kSummary;
  if (s == "candidate") return EntityRole::kCandidate;
  throw Error("unknown entity role '" + std::string(s) + "'");
}

bool is_valid_etype(std::string_view etype) {
  if (etype.empty() || etype.front() < 'A' || etype.front() > 'Z') return false;
  for (char c : etype) {
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) {
      return false;
    }
  }
  return true;
}

bool is_ontonotes_label(std::string_view etype) {
  static constexpr std::array<std::string_view, 18> kLabels = {
      "PERSON", "NORP",     "FAC",      "ORG",         "GPE",  "LOC",
      "PRODUCT", "EVENT",   "WORK_OF_ART", "LAW",      "LANGUAGE", "DATE",
      "TIME",   "PERCENT",  "MONEY",    "QUANTITY",    "ORDINAL", "CARDINAL"};
  for (std::string_view l : kLabels) {
    if (l == etype) return true;
  }
  return false;
}

std::vector<EntitySpan> parse_spans(std::istream &in,
                                    const std::string &origin) {
  std::vector<EntitySpan> spans;
  jsonl::read(in, origin, [&](const jsonl::Record &r) {
    EntitySpan s;
    s.sample_id = r.string("sample_id");
    if (s.sample_id.empty()) r.fail("sample_id", "must be nonempty");
    try {
      s.role = parse_entity_role(r.string("role"));
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      r.fail("role", e.what());
    }
    const std::int64_t start = r.integer("start_char");
    const std::int64_t end = r.integer("end_char");
    if (start < 0) r.fail("start_char", "must be >= 0");
    if (start >= end) r.fail("end_char", "must be greater than start_char");
    s.start_char = static_cast<std::size_t>(start);
    s.end_char = static_cast<std::size_t>(end);
    s.etype = r.string("etype");
    if (!is_valid_etype(s.etype)) {
      r.fail("etype", "must be uppercase ASCII, got '" + s.etype + "'");
    }
    s.surface = r.string("surface");
    s.source = r.string("source");
    spans.push_back(std::move(s));
  });
  return spans;
}

std::vector<EntitySpan> load_spans(const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  return parse_spans(in, path.string());
}

void write_spans(std::ostream &out, const std::vector<EntitySpan> &spans) {
  for (const EntitySpan &s : spans) {
    jsonl::OrderedJson j;
    j["sample_id"] = s.sample_id;
    j["role"] = to_string(s.role);
    j["start_char"] = s.start_char;
    j["end_char"] = s.end_char;
    j["etype"] = s.etype;
    j["surface"] = s.surface;
    j["source"] = s.source;
    out << j.dump() << '\n';
  }
}

void save_spans(const std::filesystem::path &path,
                const std::vector<EntitySpan> &spans) {
  jsonl::write_file(path, [&](std::ostream &out) { write_spans(out, spans); });
}

namespace {

void check_span(const EntitySpan &span, std::size_t index,
                const std::u32string &doc, const std::u32string &summary,
                ValidationReport &report) {
  if (!is_ontonotes_label(span.etype)) {
    report.warnings.push_back({SpanIssue::Kind::kUnknownLabel, index,
                               "etype '" + span.etype +
                                   "' is not an OntoNotes label"});
  }
  if (span.role == EntityRole::kCandidate) {
    report.warnings.push_back({SpanIssue::Kind::kUncheckedRole, index,
                               "candidate spans cannot be checked against "
                               "the corpus"});
    return;
  }
  const std::u32string &text =
      span.role == EntityRole::kDocument ? doc : summary;
  if (span.start_char >= span.end_char || span.end_char > text.size()) {
    report.errors.push_back(
        {SpanIssue::Kind::kBounds, index,
         "span [" + std::to_string(span.start_char) + ", " +
             std::to_string(span.end_char) + ") exceeds " +
             to_string(span.role) + " length " + std::to_string(text.size())});
    return;
  }
  const std::string actual = text::to_utf8(std::u32string_view(text).substr(
      span.start_char, span.end_char - span.start_char));
  if (actual != span.surface) {
    report.errors.push_back({SpanIssue::Kind::kMismatch, index,
                             "surface '" + span.surface +
                                 "' does not match text '" + actual + "'"});
  }
}

}  // namespace

ValidationReport validate_spans(const Sample &sample,
                                const std::vector<EntitySpan> &spans) {
  ValidationReport report;
  const std::u32string doc = text::to_u32(sample.document);
  const std::u32string summary = text::to_u32(sample.summary);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].sample_id != sample.id) {
      report.errors.push_back({SpanIssue::Kind::kForeignSample, i,
                               "span references sample '" +
                                   spans[i].sample_id + "', expected '" +
                                   sample.id + "'"});
      continue;
    }
    check_span(spans[i], i, doc, summary, report);
  }
  return report;
}

ValidationReport validate_corpus_spans(const std::vector<Sample> &samples,
                                       const std::vector<EntitySpan> &spans) {
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < samples.size(); ++i) by_id[samples[i].id] = i;

  std::map<std::size_t, std::vector<std::size_t>> groups;
  ValidationReport report;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    auto it = by_id.find(spans[i].sample_id);
    if (it == by_id.end()) {
      report.errors.push_back({SpanIssue::Kind::kForeignSample, i,
                               "unknown sample '" + spans[i].sample_id + "'"});
      continue;
    }
    groups[it->second].push_back(i);
  }
  for (const auto &[sample_index, members] : groups) {
    const Sample &sample = samples[sample_index];
    const std::u32string doc = text::to_u32(sample.document);
    const std::u32string summary = text::to_u32(sample.summary);
    for (std::size_t i : members) check_span(spans[i], i, doc, summary, report);
  }
  auto by_index = [](const SpanIssue &a, const SpanIssue &b) {
    return a.span_index < b.span_index;
  };
  std::stable_sort(report.errors.begin(), report.errors.end(), by_index);
  std::stable_sort(report.warnings.begin(), report.warnings.end(), by_index);
  return report;
}

namespace {

std::string join_normalized(const std::vector<Token> &tokens, std::size_t begin,
                            std::size_t end) {
  std::string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key += ' ';
    key += tokens[i].normalized;
  }
  return key;
}

}  // namespace

void Gazetteer::add(std::string_view surface, std::string etype) {
  const std::vector<Token> tokens = tokenize(surface);
  if (tokens.empty()) {
    throw Error("gazetteer surface '" + std::string(surface) +
                "' has no tokens");
  }
  if (!is_valid_etype(etype)) {
    throw Error("gazetteer etype '" + etype + "' is not uppercase ASCII");
  }
  entries_[join_normalized(tokens, 0, tokens.size())] = std::move(etype);
  max_tokens_ = std::max(max_tokens_, tokens.size());
}

Gazetteer Gazetteer::parse(std::istream &in, const std::string &origin) {
  Gazetteer g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw ParseError(origin, lineno, "", "expected 'surface<TAB>ETYPE'");
    }
    try {
      g.add(std::string_view(line).substr(0, tab), line.substr(tab + 1));
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(origin, lineno, "", e.what());
    }
  }
  return g;
}

Gazetteer Gazetteer::load(const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  return parse(in, path.string());
}

std::vector<EntitySpan> gazetteer_tag(std::string_view utf8,
                                      const Gazetteer &gazetteer,
                                      const TagContext &context) {
  std::vector<EntitySpan> out;
  if (gazetteer.empty()) return out;
  const std::u32string s = text::to_u32(utf8);
  const std::vector<Token> tokens = tokenize(std::u32string_view(s));

  auto whitespace_gap = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = tokens[a].end_char; k < tokens[b].start_char; ++k) {
      if (!text::is_space(s[k])) return false;
    }
    return true;
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t limit = std::min(tokens.size(), i + gazetteer.max_tokens());
    // Tokens reachable from i through whitespace-only gaps.
    std::size_t reach = i + 1;
    while (reach < limit && whitespace_gap(reach - 1, reach)) ++reach;

    std::size_t matched = 0;
    const std::string *etype = nullptr;
    for (std::size_t end = reach; end > i; --end) {
      auto it = gazetteer.entries().find(join_normalized(tokens, i, end));
      if (it != gazetteer.entries().end()) {
        matched = end - i;
        etype = &it->second;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    const std::size_t start = tokens[i].start_char;
    const std::size_t end = tokens[i + matched - 1].end_char;
    out.push_back(EntitySpan{
        context.sample_id, context.role, start, end, *etype,
        text::to_utf8(std::u32string_view(s).substr(start, end - start)),
        context.source});
    i += matched;
  }
  return out;
}

}  // namespace keysum
