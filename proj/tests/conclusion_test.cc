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

#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "keysum/conclusion.h"
#include "keysum/error.h"
#include "oracles.h"

using namespace keysum;

namespace {

Sample news(std::string doc) {
  return {"n", std::move(doc), "", std::nullopt, DomainTag::kNews};
}

std::vector<double> values(const std::vector<SentenceScore> &scores) {
  std::vector<double> out;
  for (const auto &s : scores) out.push_back(s.score);
  return out;
}

std::vector<SentenceScore> scored(const std::vector<double> &v) {
  std::vector<SentenceScore> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({"x", i, v[i]});
  return out;
}

}  // namespace

TEST_CASE("centrality on the three-sentence example") {
  auto scores = score_sentences(news("A B C. A B D. X Y Z."));
  REQUIRE(scores.size() == 3);
  CHECK(scores[0].score == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(scores[1].score == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(scores[2].score == 0.0);
  CHECK(pick_conclusion(scores) == 0);
  const auto expected = oracle::centrality({"A B C.", "A B D.", "X Y Z."});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(scores[i].score - expected[i]) < 1e-12);
  }
}

TEST_CASE("degenerate documents") {
  auto one = score_sentences(news("Only one sentence here."));
  REQUIRE(one.size() == 1);
  CHECK(one[0].score == 1.0);
  auto twins = score_sentences(news("Same words. Same words."));
  REQUIRE(twins.size() == 2);
  CHECK(twins[0].score == twins[1].score);
  CHECK_THROWS_AS(score_sentences(news("   ")), Error);
}

TEST_CASE("stopwords are ignored") {
  ScoringOptions opts;
  opts.stopwords = {"the"};
  auto scores = score_sentences(news("The dog. The cat. A cat."), opts);
  CHECK(scores[0].score == 0.0);
  CHECK(scores[1].score == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("pick_conclusion") {
  CHECK(pick_conclusion(scored({0.2, 0.9, 0.1})) == 1);
  CHECK(pick_conclusion(scored({0.5, 0.5})) == 0);
  CHECK_THROWS_AS(pick_conclusion({}), Error);
}

TEST_CASE("external scores") {
  const Sample s = news("One. Two. Three.");
  ScoringOptions opts;
  opts.method = ScoringMethod::kExternal;
  CHECK_THROWS_AS(score_sentences(s, opts), Error);

  ExternalScores ext({{"n", 2, 0.9}, {"n", 0, 0.1}, {"n", 1, 0.3}});
  opts.external = &ext;
  auto scores = score_sentences(s, opts);
  CHECK(values(scores) == std::vector<double>{0.1, 0.3, 0.9});
  CHECK(pick_conclusion(scores) == 2);

  ExternalScores short_ext({{"n", 0, 0.1}, {"n", 1, 0.3}});
  opts.external = &short_ext;
  CHECK_THROWS_WITH_AS(score_sentences(s, opts), doctest::Contains("'n'"), Error);

  ExternalScores dup({{"n", 0, 0.1}, {"n", 0, 0.2}, {"n", 1, 0.3}, {"n", 2, 0.3}});
  opts.external = &dup;
  CHECK_THROWS_AS(score_sentences(s, opts), Error);

  ExternalScores other({{"m", 0, 0.1}});
  opts.external = &other;
  CHECK_THROWS_AS(score_sentences(s, opts), Error);
}

TEST_CASE("score file parsing") {
  std::istringstream one(R"({"sample_id":"a","sentence_index":0,"score":0.5})");
  auto scores = parse_external_scores(one);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0] == SentenceScore{"a", 0, 0.5});

  std::istringstream empty("");
  CHECK(parse_external_scores(empty).empty());

  std::istringstream bad(
      "{\"sample_id\":\"a\",\"sentence_index\":0,\"score\":0.5}\n"
      "{\"sample_id\":\"a\",\"sentence_index\":1,\"score\":\"high\"}\n");
  try {
    parse_external_scores(bad, "s.jsonl");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "score");
  }

  std::stringstream io;
  write_scores(io, {{"a", 0, 0.25}, {"b", 3, -1.5}});
  auto back = parse_external_scores(io);
  CHECK(back == std::vector<SentenceScore>{{"a", 0, 0.25}, {"b", 3, -1.5}});
}

TEST_CASE("property: pick_conclusion is permutation and scale invariant") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + rng() % 10);
    for (double &x : v) x = static_cast<double>(rng() % 4) / 4.0;
    auto scores = scored(v);
    const std::size_t expected = pick_conclusion(scores);
    const double best = *std::max_element(v.begin(), v.end());
    CHECK(v[expected] == best);
    for (std::size_t i = 0; i < expected; ++i) CHECK(v[i] < best);

    std::shuffle(scores.begin(), scores.end(), rng);
    CHECK(pick_conclusion(scores) == expected);
    const double c = 0.5 + static_cast<double>(rng() % 100);
    for (auto &s : scores) s.score *= c;
    CHECK(pick_conclusion(scores) == expected);
  }
}

TEST_CASE("property: centrality ignores word order inside sentences") {
  std::mt19937_64 rng(29);
  const std::vector<std::string> vocab = {"tom", "ann", "bus", "late",
                                          "rain", "work", "cafe"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::string>> sentences(2 + rng() % 5);
    for (auto &s : sentences) {
      s.resize(1 + rng() % 6);
      for (auto &w : s) w = vocab[rng() % vocab.size()];
    }
    auto render = [](const std::vector<std::vector<std::string>> &ss) {
      std::string doc;
      for (const auto &s : ss) {
        for (std::size_t i = 0; i < s.size(); ++i) {
          doc += (i ? " " : (doc.empty() ? "" : " ")) + s[i];
        }
        doc += ".";
      }
      return doc;
    };
    const auto before = values(score_sentences(news(render(sentences))));
    for (auto &s : sentences) std::shuffle(s.begin(), s.end(), rng);
    const auto after = values(score_sentences(news(render(sentences))));
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(std::abs(before[i] - after[i]) < 1e-12);
    }
  }
}
