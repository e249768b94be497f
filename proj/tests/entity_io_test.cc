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

#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "keysum/entity_io.h"
#include "keysum/error.h"
#include "keysum/text.h"

using namespace keysum;

namespace {

std::vector<EntitySpan> parse(const std::string &s) {
  std::istringstream in(s);
  return parse_spans(in, "spans.jsonl");
}

Sample sample(std::string id, std::string doc, std::string summary = "") {
  return {std::move(id), std::move(doc), std::move(summary), std::nullopt,
          DomainTag::kDialogue};
}

EntitySpan span(std::size_t start, std::size_t end, std::string etype,
                std::string surface, EntityRole role = EntityRole::kDocument,
                std::string id = "d1") {
  return {std::move(id), role, start, end, std::move(etype), std::move(surface),
          "test"};
}

}  // namespace

TEST_CASE("parse one span line") {
  auto spans = parse(
      R"({"sample_id":"d1","role":"document","start_char":0,"end_char":4,"etype":"PERSON","surface":"John","source":"test"})");
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == span(0, 4, "PERSON", "John"));
}

TEST_CASE("empty span file") { CHECK(parse("").empty()); }

TEST_CASE("span schema errors name the line") {
  const std::string good =
      R"({"sample_id":"d1","role":"document","start_char":0,"end_char":4,"etype":"PERSON","surface":"John","source":"t"})";
  auto expect_error = [&](const std::string &bad, const std::string &field) {
    try {
      parse(good + "\n" + bad + "\n");
      FAIL("expected ParseError");
    } catch (const ParseError &e) {
      CHECK(e.line() == 2);
      CHECK(e.field() == field);
    }
  };
  expect_error(
      R"({"sample_id":"d1","role":"document","start_char":4,"end_char":4,"etype":"PERSON","surface":"","source":"t"})",
      "end_char");
  expect_error(
      R"({"sample_id":"d1","role":"document","start_char":-1,"end_char":4,"etype":"PERSON","surface":"John","source":"t"})",
      "start_char");
  expect_error(
      R"({"sample_id":"d1","role":"title","start_char":0,"end_char":4,"etype":"PERSON","surface":"John","source":"t"})",
      "role");
  expect_error(
      R"({"sample_id":"d1","role":"document","start_char":0,"end_char":4,"etype":"person","surface":"John","source":"t"})",
      "etype");
  expect_error(
      R"({"sample_id":"d1","role":"document","start_char":0,"end_char":4,"etype":"PERSON","surface":"John"})",
      "source");
  expect_error(
      R"({"sample_id":"d1","role":"document","start_char":"0","end_char":4,"etype":"PERSON","surface":"John","source":"t"})",
      "start_char");
}

TEST_CASE("validate_spans") {
  const Sample s = sample("d1", "John: Hi", "John waved.");
  CHECK(validate_spans(s, {span(0, 4, "PERSON", "John")}).clean());

  auto mismatch = validate_spans(s, {span(0, 4, "PERSON", "Jane")});
  REQUIRE(mismatch.errors.size() == 1);
  CHECK(mismatch.errors[0].kind == SpanIssue::Kind::kMismatch);

  auto bounds = validate_spans(s, {span(5, 9, "PERSON", "Hi!!")});
  REQUIRE(bounds.errors.size() == 1);
  CHECK(bounds.errors[0].kind == SpanIssue::Kind::kBounds);

  auto summary =
      validate_spans(s, {span(0, 4, "PERSON", "John", EntityRole::kSummary)});
  CHECK(summary.clean());

  auto foreign = validate_spans(s, {span(0, 4, "PERSON", "John",
                                         EntityRole::kDocument, "d2")});
  REQUIRE(foreign.errors.size() == 1);
  CHECK(foreign.errors[0].kind == SpanIssue::Kind::kForeignSample);

  auto event = validate_spans(s, {span(0, 4, "CHARACTER", "John")});
  CHECK(event.ok());
  REQUIRE(event.warnings.size() == 1);
  CHECK(event.warnings[0].kind == SpanIssue::Kind::kUnknownLabel);

  auto candidate =
      validate_spans(s, {span(0, 4, "PERSON", "x", EntityRole::kCandidate)});
  CHECK(candidate.ok());
  CHECK(candidate.warnings.size() == 1);
}

TEST_CASE("validate offsets are code points") {
  const Sample s = sample("d1", "Zoë met José");
  CHECK(validate_spans(s, {span(8, 12, "PERSON", "José")}).clean());
  CHECK_FALSE(validate_spans(s, {span(9, 13, "PERSON", "José")}).ok());
}

TEST_CASE("validate_corpus_spans reports unknown samples") {
  std::vector<Sample> samples = {sample("a", "Tom"), sample("b", "Ann")};
  auto report = validate_corpus_spans(
      samples, {span(0, 3, "PERSON", "Ann", EntityRole::kDocument, "b"),
                span(0, 3, "PERSON", "Tom", EntityRole::kDocument, "zzz"),
                span(0, 3, "PERSON", "Tim", EntityRole::kDocument, "a")});
  REQUIRE(report.errors.size() == 2);
  CHECK(report.errors[0].span_index == 1);
  CHECK(report.errors[0].kind == SpanIssue::Kind::kForeignSample);
  CHECK(report.errors[1].span_index == 2);
  CHECK(report.errors[1].kind == SpanIssue::Kind::kMismatch);
}

TEST_CASE("gazetteer_tag") {
  Gazetteer g;
  g.add("tom", "PERSON");
  auto spans = gazetteer_tag("Tom met Tom", g, {"d1", EntityRole::kDocument});
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start_char == 0);
  CHECK(spans[0].end_char == 3);
  CHECK(spans[1].start_char == 8);
  CHECK(spans[1].end_char == 11);
  CHECK(spans[1].etype == "PERSON");
  CHECK(spans[1].source == "gazetteer");

  CHECK(gazetteer_tag("Tom", Gazetteer{}, {"d1"}).empty());
  CHECK(gazetteer_tag("Atomic", g, {"d1"}).empty());
  CHECK(gazetteer_tag("Tomorrow, tom's", g, {"d1"}).empty());
}

TEST_CASE("gazetteer prefers the longest entry") {
  Gazetteer g;
  g.add("New York", "GPE");
  g.add("New York Times", "ORG");
  g.add("york", "GPE");
  auto spans =
      gazetteer_tag("the new  york times and York", g, {"d1"});
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].surface == "new  york times");
  CHECK(spans[0].etype == "ORG");
  CHECK(spans[1].surface == "York");

  auto split = gazetteer_tag("New-York", g, {"d1"});
  REQUIRE(split.size() == 1);
  CHECK(split[0].surface == "York");
}

TEST_CASE("gazetteer file parsing") {
  std::istringstream in("# comment\nTom\tPERSON\nthe Alps\tLOC\n\n");
  Gazetteer g = Gazetteer::parse(in, "g.tsv");
  CHECK(g.entries().size() == 2);
  CHECK(g.max_tokens() == 2);
  std::istringstream bad("Tom PERSON\n");
  CHECK_THROWS_AS(Gazetteer::parse(bad, "g.tsv"), ParseError);
  std::istringstream lower("Tom\tperson\n");
  CHECK_THROWS_AS(Gazetteer::parse(lower, "g.tsv"), ParseError);
}

TEST_CASE("property: span JSONL round-trip is identity") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> etypes = {"PERSON", "GPE", "EVENT", "X_1"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EntitySpan> spans;
    const std::size_t n = rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t start = rng() % 1000;
      spans.push_back({text::to_utf8(testing::random_unicode(rng, 6)),
                       static_cast<EntityRole>(rng() % 3), start,
                       start + 1 + rng() % 50, etypes[rng() % etypes.size()],
                       text::to_utf8(testing::random_unicode(rng, 12)),
                       text::to_utf8(testing::random_unicode(rng, 4))});
    }
    std::stringstream io;
    write_spans(io, spans);
    CHECK(parse_spans(io, "rt") == spans);
  }
}

TEST_CASE("property: gazetteer spans are disjoint and validate") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"tom", "Ann", "new", "york",
                                          "café", "東京", "and", "the"};
  Gazetteer g;
  g.add("Tom", "PERSON");
  g.add("ann", "PERSON");
  g.add("New York", "GPE");
  g.add("york", "GPE");
  g.add("Café", "FAC");
  g.add("東京", "GPE");
  for (int trial = 0; trial < 300; ++trial) {
    std::string doc;
    const std::size_t n = 1 + rng() % 15;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) doc += std::string(" \n,.'")[rng() % 5];
      if (rng() % 4 == 0) doc += ' ';
      doc += words[rng() % words.size()];
    }
    const Sample s = sample("d1", doc);
    auto spans = gazetteer_tag(doc, g, {"d1"});
    for (std::size_t i = 1; i < spans.size(); ++i) {
      CHECK(spans[i - 1].end_char <= spans[i].start_char);
    }
    CHECK(validate_spans(s, spans).clean());
  }
}
