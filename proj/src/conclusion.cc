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

#include "keysum/conclusion.h"

#include <cmath>
#include <ostream>

#include "keysum/error.h"
#include "keysum/jsonl.h"
#include "keysum/text.h"

namespace keysum {

std::string to_string(ScoringMethod method) {
  return method == ScoringMethod::kCentrality ? "centrality" : "external";
}

ScoringMethod parse_scoring_method(std::string_view s) {
  if (s == "centrality") return ScoringMethod::kCentrality;
  if (s == "external") return ScoringMethod::kExternal;
  throw Error("unknown scoring method '" + std::string(s) + "'");
}

ExternalScores::ExternalScores(const std::vector<SentenceScore> &scores) {
  for (const SentenceScore &s : scores) {
    if (!by_sample_[s.sample_id].emplace(s.sentence_index, s.score).second) {
      ++duplicates_[s.sample_id];
    }
  }
}

bool ExternalScores::contains(const std::string &sample_id) const {
  return by_sample_.count(sample_id) > 0;
}

std::vector<SentenceScore> ExternalScores::for_sample(
    const std::string &sample_id, std::size_t sentence_count) const {
  auto it = by_sample_.find(sample_id);
  if (it == by_sample_.end()) {
    throw Error("no external scores for sample '" + sample_id + "'");
  }
  if (duplicates_.count(sample_id)) {
    throw Error("duplicate external sentence scores for sample '" +
                sample_id + "'");
  }
  const auto &scores = it->second;
  if (scores.size() != sentence_count ||
      scores.rbegin()->first != sentence_count - 1) {
    throw Error("external scores for sample '" + sample_id + "' cover " +
                std::to_string(scores.size()) + " sentences, segmentation has " +
                std::to_string(sentence_count));
  }
  std::vector<SentenceScore> out;
  out.reserve(scores.size());
  for (const auto &[index, score] : scores) {
    out.push_back({sample_id, index, score});
  }
  return out;
}

namespace {

using TermVector = std::map<std::string, double>;

double norm(const TermVector &v) {
  double sum = 0.0;
  for (const auto &[term, weight] : v) sum += weight * weight;
  return std::sqrt(sum);
}

double dot(const TermVector &a, const TermVector &b) {
  const TermVector &small = a.size() <= b.size() ? a : b;
  const TermVector &large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto &[term, weight] : small) {
    auto it = large.find(term);
    if (it != large.end()) sum += weight * it->second;
  }
  return sum;
}

std::vector<SentenceScore> centrality(const Sample &sample,
                                      const std::vector<SentenceSpan> &spans,
                                      const std::set<std::string> &stopwords) {
  const std::u32string doc = text::to_u32(sample.document);
  std::vector<TermVector> vectors;
  std::vector<double> norms;
  for (const SentenceSpan &span : spans) {
    TermVector tf;
    const auto sentence = std::u32string_view(doc).substr(
        span.start_char, span.end_char - span.start_char);
    for (const Token &t : tokenize(sentence)) {
      if (!stopwords.count(t.normalized)) tf[t.normalized] += 1.0;
    }
    norms.push_back(norm(tf));
    vectors.push_back(std::move(tf));
  }

  std::vector<SentenceScore> out;
  out.reserve(spans.size());
  if (spans.size() == 1) {
    out.push_back({sample.id, 0, 1.0});
    return out;
  }
  for (std::size_t i = 0; i < spans.size(); ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < spans.size(); ++j) {
      if (j == i || norms[i] == 0.0 || norms[j] == 0.0) continue;
      score += dot(vectors[i], vectors[j]) / (norms[i] * norms[j]);
    }
    out.push_back({sample.id, i, score});
  }
  return out;
}

}  // namespace

std::vector<SentenceScore> score_sentences(const Sample &sample,
                                           const ScoringOptions &options) {
  const std::vector<SentenceSpan> spans =
      segment_sentences(sample.document, sample.domain);
  if (spans.empty()) {
    throw Error("sample '" + sample.id + "' has no sentences");
  }
  if (options.method == ScoringMethod::kExternal) {
    if (options.external == nullptr) {
      throw Error("external scoring requested but no scores were loaded");
    }
    return options.external->for_sample(sample.id, spans.size());
  }
  return centrality(sample, spans, options.stopwords);
}

std::size_t pick_conclusion(const std::vector<SentenceScore> &scores) {
  if (scores.empty()) throw Error("pick_conclusion: no scores");
  const SentenceScore *best = &scores.front();
  for (const SentenceScore &s : scores) {
    if (s.score > best->score ||
        (s.score == best->score && s.sentence_index < best->sentence_index)) {
      best = &s;
    }
  }
  return best->sentence_index;
}

std::vector<SentenceScore> parse_external_scores(std::istream &in,
                                                 const std::string &origin) {
  std::vector<SentenceScore> out;
  jsonl::read(in, origin, [&](const jsonl::Record &r) {
    SentenceScore s;
    s.sample_id = r.string("sample_id");
    const std::int64_t index = r.integer("sentence_index");
    if (index < 0) r.fail("sentence_index", "must be >= 0");
    s.sentence_index = static_cast<std::size_t>(index);
    s.score = r.number("score");
    if (!std::isfinite(s.score)) r.fail("score", "must be finite");
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<SentenceScore> load_external_scores(
    const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  return parse_external_scores(in, path.string());
}

void write_scores(std::ostream &out, const std::vector<SentenceScore> &scores) {
  for (const SentenceScore &s : scores) {
    jsonl::OrderedJson j;
    j["sample_id"] = s.sample_id;
    j["sentence_index"] = s.sentence_index;
    j["score"] = s.score;
    out << j.dump() << '\n';
  }
}

std::set<std::string> load_stopwords(const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    for (const Token &t : tokenize(line)) words.insert(t.normalized);
  }
  return words;
}

}  // namespace keysum
