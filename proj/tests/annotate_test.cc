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
#include "keysum/annotate.h"
#include "keysum/error.h"
#include "keysum/text.h"

using namespace keysum;

namespace {

Sample sample(std::string doc) {
  return {"d", std::move(doc), "", std::nullopt, DomainTag::kNews};
}

EntitySpan span(std::size_t start, std::size_t end, std::string etype = "PERSON") {
  return {"d", EntityRole::kDocument, start, end, std::move(etype), "", "t"};
}

AnnotationPlan plan(std::vector<EntitySpan> spans,
                    std::optional<SentenceSpan> conclusion = std::nullopt) {
  AnnotationPlan p;
  p.sample_id = "d";
  p.entity_spans = std::move(spans);
  p.conclusion = conclusion;
  return p;
}

}  // namespace

TEST_CASE("resolve_spans") {
  auto kept = resolve_spans({span(5, 10, "DATE"), span(0, 8)}, {"PERSON", "DATE"});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].start_char == 0);
  CHECK(kept[0].etype == "PERSON");

  CHECK(resolve_spans({span(0, 3, "MONEY")}, {"PERSON"}).empty());

  auto sorted = resolve_spans({span(9, 12), span(0, 3), span(4, 6, "DATE")},
                              {"PERSON", "DATE"});
  REQUIRE(sorted.size() == 3);
  CHECK(sorted[0].start_char == 0);
  CHECK(sorted[1].start_char == 4);
  CHECK(sorted[2].start_char == 9);

  auto equal_len = resolve_spans({span(2, 5), span(0, 3)}, {"PERSON"});
  REQUIRE(equal_len.size() == 1);
  CHECK(equal_len[0].start_char == 0);

  EntitySpan summary = span(0, 3);
  summary.role = EntityRole::kSummary;
  CHECK(resolve_spans({summary}, {"PERSON"}).empty());
}

TEST_CASE("entity markers") {
  auto doc = apply_plan(sample("Tom left."), plan({span(0, 3)}));
  CHECK(doc.annotated == "<Tom> left.");
  CHECK(doc.insertions == std::vector<Insertion>{{0, "<"}, {3, ">"}});
  CHECK(strip_annotations(doc) == "Tom left.");
}

TEST_CASE("conclusion markers") {
  auto doc = apply_plan(sample("A. B."), plan({}, SentenceSpan{3, 5, 1}));
  CHECK(doc.annotated == "A. <conclusion>B.</conclusion>");
  CHECK(strip_annotations(doc) == "A. B.");
}

TEST_CASE("empty plan is the identity") {
  auto doc = apply_plan(sample("Nothing <here>."), plan({}));
  CHECK(doc.annotated == "Nothing <here>.");
  CHECK(doc.insertions.empty());
}

TEST_CASE("literal angle brackets survive stripping") {
  const std::string text = "a < b > c. Tom <3 Ann";
  auto doc = apply_plan(sample(text), plan({span(11, 14)}));
  CHECK(doc.annotated == "a < b > c. <Tom> <3 Ann");
  CHECK(strip_annotations(doc) == text);
}

TEST_CASE("entities nest inside the conclusion at shared offsets") {
  auto doc = apply_plan(sample("Hi. Tom won."),
                        plan({span(4, 7), span(8, 11, "X")},
                             SentenceSpan{4, 12, 1}));
  CHECK(doc.annotated == "Hi. <conclusion><Tom> <won>.</conclusion>");
  auto whole = apply_plan(sample("Tom"), plan({span(0, 3)}, SentenceSpan{0, 3, 0}));
  CHECK(whole.annotated == "<conclusion><Tom></conclusion>");
  CHECK(strip_annotations(whole) == "Tom");
}

TEST_CASE("offsets are code points") {
  auto doc = apply_plan(sample("Zoë 😀 José."), plan({span(6, 10)}));
  CHECK(doc.annotated == "Zoë 😀 <José>.");
}

TEST_CASE("invalid plans are rejected") {
  const Sample s = sample("Hi. Tom won.");
  CHECK_THROWS_AS(apply_plan(s, plan({span(4, 20)})), Error);
  CHECK_THROWS_AS(apply_plan(s, plan({span(4, 7), span(5, 8)})), Error);
  CHECK_THROWS_AS(apply_plan(s, plan({span(8, 11), span(4, 7)})), Error);
  CHECK_THROWS_WITH_AS(apply_plan(s, plan({span(1, 5)}, SentenceSpan{4, 12, 1})),
                       doctest::Contains("crosses"), Error);
  CHECK_THROWS_AS(apply_plan(s, plan({span(8, 12)}, SentenceSpan{0, 10, 0})),
                  Error);
  CHECK_THROWS_AS(apply_plan(s, plan({}, SentenceSpan{4, 40, 1})), Error);
}

TEST_CASE("custom tokens") {
  AnnotationPlan p = plan({span(0, 3)}, SentenceSpan{0, 9, 0});
  p.tokens = {"[[", "]]", "<c>", "</c>"};
  auto doc = apply_plan(sample("Tom left."), p);
  CHECK(doc.annotated == "<c>[[Tom]] left.</c>");
  CHECK(strip_annotations(doc) == "Tom left.");
}

TEST_CASE("strip detects tampering") {
  auto doc = apply_plan(sample("Tom left."), plan({span(0, 3)}));
  doc.annotated = "Tom left.";
  CHECK_THROWS_AS(strip_annotations(doc), Error);
}

TEST_CASE("write_annotated") {
  std::ostringstream out;
  write_annotated(out, apply_plan(sample("Tom left."), plan({span(0, 3)})));
  CHECK(out.str() ==
        "{\"id\":\"d\",\"annotated\":\"<Tom> left.\",\"insertions\":"
        "[{\"offset\":0,\"text\":\"<\"},{\"offset\":3,\"text\":\">\"}]}\n");
}

TEST_CASE("property: strip inverts apply_plan on fuzzed documents") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::u32string u = testing::random_unicode(rng, 120);
    const Sample s = sample(text::to_utf8(u));
    std::vector<EntitySpan> spans;
    std::size_t pos = rng() % 3;
    while (pos < u.size()) {
      const std::size_t len = 1 + rng() % 6;
      if (pos + len > u.size()) break;
      if (rng() % 2) spans.push_back(span(pos, pos + len));
      pos += len + rng() % 5;
    }
    auto doc = apply_plan(s, plan(spans));
    CHECK(strip_annotations(doc) == s.document);
    std::size_t opens = 0, closes = 0;
    for (const Insertion &ins : doc.insertions) {
      opens += ins.text == "<";
      closes += ins.text == ">";
    }
    CHECK(opens == spans.size());
    CHECK(closes == spans.size());
  }
}
