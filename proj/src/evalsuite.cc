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

#include "keysum/evalsuite.h"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include "keysum/error.h"
#include "keysum/jsonl.h"
#include "keysum/porter.h"
#include "keysum/text.h"

namespace keysum {

namespace {

std::unordered_map<std::string, const Sample *> index_samples(
    const std::vector<Sample> &samples) {
  std::unordered_map<std::string, const Sample *> out;
  for (const Sample &s : samples) out.emplace(s.id, &s);
  return out;
}

const Sample &resolve(
    const std::unordered_map<std::string, const Sample *> &index,
    const CandidateSummary &c) {
  auto it = index.find(c.sample_id);
  if (it == index.end()) {
    throw Error("candidate of system '" + c.system +
                "' references unknown sample '" + c.sample_id + "'");
  }
  return *it->second;
}

}  // namespace

std::vector<CandidateSummary> parse_candidates(std::istream &in,
                                               const std::string &origin) {
  std::vector<CandidateSummary> out;
  std::set<std::pair<std::string, std::string>> seen;
  jsonl::read(in, origin, [&](const jsonl::Record &r) {
    CandidateSummary c{r.string("sample_id"), r.string("system"),
                       r.string("text")};
    if (!seen.emplace(c.sample_id, c.system).second) {
      r.fail("", "duplicate candidate for sample '" + c.sample_id +
                     "' and system '" + c.system + "'");
    }
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<CandidateSummary> load_candidates(
    const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  return parse_candidates(in, path.string());
}

void check_candidates(const std::vector<Sample> &samples,
                      const std::vector<CandidateSummary> &candidates) {
  const auto index = index_samples(samples);
  for (const CandidateSummary &c : candidates) resolve(index, c);
}

// ROUGE-1 ------------------------------------------------------------------

namespace {

std::vector<std::string> rouge_tokens(std::string_view text,
                                      const RougeOptions &options) {
  std::vector<std::string> out;
  for (Token &t : tokenize(text)) {
    if (options.stopwords.count(t.normalized)) continue;
    out.push_back(options.stem ? porter_stem(t.normalized)
                               : std::move(t.normalized));
  }
  return out;
}

}  // namespace

RougeScore rouge1_tokens(const std::vector<std::string> &candidate,
                         const std::vector<std::string> &reference) {
  RougeScore score;
  if (candidate.empty() || reference.empty()) return score;
  std::unordered_map<std::string, long> ref_counts;
  for (const std::string &t : reference) ++ref_counts[t];
  long overlap = 0;
  for (const std::string &t : candidate) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  score.precision = static_cast<double>(overlap) / c;
  score.recall = static_cast<double>(overlap) / r;
  // 2pr/(p+r) from counts.
  score.f1 = 2.0 * static_cast<double>(overlap) / (c + r);
  return score;
}

RougeScore rouge1(std::string_view candidate, std::string_view reference,
                  const RougeOptions &options) {
  return rouge1_tokens(rouge_tokens(candidate, options),
                       rouge_tokens(reference, options));
}

std::vector<SystemRouge> rouge_by_system(
    const std::vector<Sample> &samples,
    const std::vector<CandidateSummary> &candidates,
    const RougeOptions &options) {
  const auto index = index_samples(samples);
  std::map<std::string, SystemRouge> acc;
  for (const CandidateSummary &c : candidates) {
    const Sample &s = resolve(index, c);
    const RougeScore score = rouge1(c.text, s.summary, options);
    SystemRouge &row = acc[c.system];
    row.system = c.system;
    ++row.count;
    row.mean.precision += score.precision;
    row.mean.recall += score.recall;
    row.mean.f1 += score.f1;
  }
  std::vector<SystemRouge> out;
  for (auto &[system, row] : acc) {
    const double n = static_cast<double>(row.count);
    row.mean.precision /= n;
    row.mean.recall /= n;
    row.mean.f1 /= n;
    out.push_back(row);
  }
  return out;
}

// Entity inclusion ---------------------------------------------------------

std::string to_string(InclusionMatch match) {
  return match == InclusionMatch::kSurface ? "surface" : "spans";
}

InclusionMatch parse_inclusion_match(std::string_view s) {
  if (s == "surface") return InclusionMatch::kSurface;
  if (s == "spans") return InclusionMatch::kSpans;
  throw Error("unknown inclusion match mode '" + std::string(s) + "'");
}

namespace {

bool word_char(char32_t c) { return text::is_alnum(c) || text::is_mark(c); }

bool contains_normalized(const std::u32string &hay, const std::u32string &needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  const bool open_edge = word_char(needle.front());
  const bool close_edge = word_char(needle.back());
  for (std::size_t p = hay.find(needle); p != std::u32string::npos;
       p = hay.find(needle, p + 1)) {
    const std::size_t q = p + needle.size();
    const bool before_ok = !open_edge || p == 0 || !word_char(hay[p - 1]);
    const bool after_ok = !close_edge || q == hay.size() || !word_char(hay[q]);
    if (before_ok && after_ok) return true;
  }
  return false;
}

struct RefEntity {
  std::string etype;
  std::u32string normalized;

  bool operator<(const RefEntity &o) const {
    return std::tie(etype, normalized) < std::tie(o.etype, o.normalized);
  }
};

}  // namespace

bool contains_at_token_boundary(std::string_view haystack,
                                std::string_view needle) {
  return contains_normalized(text::normalize_surface(text::to_u32(haystack)),
                             text::normalize_surface(text::to_u32(needle)));
}

std::vector<InclusionReport> entity_inclusion(
    const std::vector<Sample> &samples, const std::vector<EntitySpan> &ref_spans,
    const std::vector<CandidateSummary> &candidates, InclusionMatch match,
    const std::map<std::string, std::vector<EntitySpan>> &candidate_spans) {
  const auto index = index_samples(samples);

  std::map<std::string, std::set<RefEntity>> entities;
  for (const EntitySpan &span : ref_spans) {
    if (span.role != EntityRole::kSummary) continue;
    entities[span.sample_id].insert(
        {span.etype, text::normalize_surface(text::to_u32(span.surface))});
  }

  // system -> sample -> entities found among that system's candidate spans
  std::map<std::string, std::map<std::string, std::set<RefEntity>>> tagged;
  if (match == InclusionMatch::kSpans) {
    for (const auto &[system, spans] : candidate_spans) {
      for (const EntitySpan &span : spans) {
        tagged[system][span.sample_id].insert(
            {span.etype, text::normalize_surface(text::to_u32(span.surface))});
      }
    }
  }

  std::map<std::string, InclusionReport> reports;
  for (const CandidateSummary &c : candidates) {
    resolve(index, c);
    InclusionReport &report = reports[c.system];
    report.system = c.system;
    auto it = entities.find(c.sample_id);
    if (it == entities.end()) continue;

    const std::u32string hay = text::normalize_surface(text::to_u32(c.text));
    const std::set<RefEntity> *found = nullptr;
    if (match == InclusionMatch::kSpans) {
      auto sys = tagged.find(c.system);
      if (sys != tagged.end()) {
        auto sample = sys->second.find(c.sample_id);
        if (sample != sys->second.end()) found = &sample->second;
      }
    }
    for (const RefEntity &e : it->second) {
      const bool included = match == InclusionMatch::kSurface
                                ? contains_normalized(hay, e.normalized)
                                : (found != nullptr && found->count(e) > 0);
      InclusionCount &per = report.per_etype[e.etype];
      ++per.total;
      ++report.overall.total;
      if (included) {
        ++per.included;
        ++report.overall.included;
      }
    }
  }

  std::vector<InclusionReport> out;
  for (auto &[system, report] : reports) out.push_back(std::move(report));
  return out;
}

// Length split -------------------------------------------------------------

LengthSplitReport length_split(
    const std::vector<Sample> &samples,
    const std::vector<CandidateSummary> &candidates) {
  if (samples.empty()) throw Error("length_split: empty corpus");
  const auto index = index_samples(samples);

  std::vector<std::size_t> doc_len(samples.size());
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    doc_len[i] = token_length(samples[i].document);
    total += static_cast<double>(doc_len[i]);
  }

  LengthSplitReport report;
  report.threshold = total / static_cast<double>(samples.size());

  std::unordered_map<std::string, bool> is_short;
  double doc_sum[2] = {0, 0};
  double ref_sum[2] = {0, 0};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool s = static_cast<double>(doc_len[i]) <= report.threshold;
    is_short[samples[i].id] = s;
    LengthBucket &b = s ? report.short_bucket : report.long_bucket;
    ++b.count;
    doc_sum[s ? 0 : 1] += static_cast<double>(doc_len[i]);
    ref_sum[s ? 0 : 1] += static_cast<double>(token_length(samples[i].summary));
  }

  // system -> bucket -> (sum, count)
  std::map<std::string, std::array<std::pair<double, std::size_t>, 2>> sys;
  for (const CandidateSummary &c : candidates) {
    resolve(index, c);
    auto &slot = sys[c.system][is_short[c.sample_id] ? 0 : 1];
    slot.first += static_cast<double>(token_length(c.text));
    ++slot.second;
  }
  for (const auto &[system, buckets] : sys) {
    if (buckets[0].second + buckets[1].second != samples.size()) {
      throw Error("length_split: system '" + system + "' has " +
                  std::to_string(buckets[0].second + buckets[1].second) +
                  " candidates for " + std::to_string(samples.size()) +
                  " samples");
    }
  }

  LengthBucket *buckets[2] = {&report.short_bucket, &report.long_bucket};
  for (int k = 0; k < 2; ++k) {
    LengthBucket &b = *buckets[k];
    if (b.count == 0) continue;
    const double n = static_cast<double>(b.count);
    b.mean_doc_len = doc_sum[k] / n;
    b.mean_reference_len = ref_sum[k] / n;
    for (const auto &[system, slots] : sys) {
      b.mean_summary_len[system] = slots[k].first / n;
    }
  }
  return report;
}

// Hallucination judge ------------------------------------------------------

const char kHallucinationDefinition[] =
    "hallucination refers to any incorrect content, including "
    "misattribution, misinterpretation, and redundant content";

JudgeTemplate JudgeTemplate::defaults() {
  return JudgeTemplate{
      "You will read a source document and a summary of it. Count the "
      "hallucinations in the summary. Here, {definition}.\n\n"
      "Source document:\n{document}\n\n"
      "Summary:\n{summary}\n\n"
      "Answer with a JSON object {\"hallucination_count\": <integer>, "
      "\"rationale\": <string>} listing each hallucinated statement in the "
      "rationale."};
}

JudgeTemplate JudgeTemplate::load(const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (text.find("{summary}") == std::string::npos ||
      text.find("{document}") == std::string::npos) {
    throw Error(path.string() +
                ": judge template needs {document} and {summary} placeholders");
  }
  return JudgeTemplate{std::move(text)};
}

namespace {

// Expands {definition}, {document} and {summary} in a single pass; braces
// inside substituted text are left alone.
std::string expand(const std::string &tmpl, const std::string &document,
                   const std::string &summary) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::string_view rest = std::string_view(tmpl).substr(i);
      if (rest.starts_with("{definition}")) {
        out += kHallucinationDefinition;
        i += 12;
        continue;
      }
      if (rest.starts_with("{document}")) {
        out += document;
        i += 10;
        continue;
      }
      if (rest.starts_with("{summary}")) {
        out += summary;
        i += 9;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

}  // namespace

std::vector<JudgePrompt> build_judge_prompts(
    const std::vector<Sample> &samples,
    const std::vector<CandidateSummary> &candidates, const JudgeTemplate &tmpl) {
  const auto index = index_samples(samples);
  std::vector<const CandidateSummary *> ordered;
  for (const CandidateSummary &c : candidates) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CandidateSummary *a, const CandidateSummary *b) {
                     return std::tie(a->system, a->sample_id) <
                            std::tie(b->system, b->sample_id);
                   });
  std::vector<JudgePrompt> out;
  out.reserve(ordered.size());
  for (const CandidateSummary *c : ordered) {
    const Sample &s = resolve(index, *c);
    out.push_back({c->sample_id, c->system, expand(tmpl.text, s.document, c->text)});
  }
  return out;
}

void write_judge_prompts(std::ostream &out,
                         const std::vector<JudgePrompt> &prompts) {
  for (const JudgePrompt &p : prompts) {
    jsonl::OrderedJson j;
    j["sample_id"] = p.sample_id;
    j["system"] = p.system;
    j["prompt"] = p.prompt;
    out << j.dump() << '\n';
  }
}

void emit_judge_prompts(const std::vector<Sample> &samples,
                        const std::vector<CandidateSummary> &candidates,
                        const JudgeTemplate &tmpl,
                        const std::filesystem::path &path) {
  const auto prompts = build_judge_prompts(samples, candidates, tmpl);
  jsonl::write_file(path,
                    [&](std::ostream &out) { write_judge_prompts(out, prompts); });
}

std::vector<JudgeVerdict> parse_verdicts(std::istream &in,
                                         const std::string &origin) {
  std::vector<JudgeVerdict> out;
  jsonl::read(in, origin, [&](const jsonl::Record &r) {
    JudgeVerdict v;
    v.sample_id = r.string("sample_id");
    v.system = r.string("system");
    v.hallucination_count = r.integer("hallucination_count");
    if (v.hallucination_count < 0) {
      r.fail("hallucination_count", "must be >= 0");
    }
    v.rationale = r.optional_string("rationale").value_or("");
    out.push_back(std::move(v));
  });
  return out;
}

std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path &path) {
  std::ifstream in = jsonl::open_input(path);
  return parse_verdicts(in, path.string());
}

VerdictSummary aggregate_verdicts(const std::vector<JudgeVerdict> &verdicts) {
  VerdictSummary summary;
  std::map<std::string, SystemHallucination> systems;
  for (const JudgeVerdict &v : verdicts) {
    if (v.hallucination_count < 0) {
      throw Error("negative hallucination count for sample '" + v.sample_id +
                  "'");
    }
    auto &row = summary.per_sample[v.sample_id];
    if (!row.emplace(v.system, v.hallucination_count).second) {
      throw Error("duplicate verdict for sample '" + v.sample_id +
                  "' and system '" + v.system + "'");
    }
    SystemHallucination &s = systems[v.system];
    s.system = v.system;
    ++s.samples;
    s.total += v.hallucination_count;
  }
  for (auto &[name, s] : systems) {
    s.mean_per_sample =
        static_cast<double>(s.total) / static_cast<double>(s.samples);
    summary.systems.push_back(s);
  }
  return summary;
}

// Reporting ----------------------------------------------------------------

nlohmann::ordered_json to_json(const std::vector<SystemRouge> &rouge) {
  auto out = nlohmann::ordered_json::array();
  for (const SystemRouge &r : rouge) {
    out.push_back({{"system", r.system},
                   {"count", r.count},
                   {"precision", r.mean.precision},
                   {"recall", r.mean.recall},
                   {"f1", r.mean.f1}});
  }
  return out;
}

namespace {

nlohmann::ordered_json count_json(const InclusionCount &c) {
  return {{"total", c.total}, {"included", c.included}, {"ratio", c.ratio()}};
}

nlohmann::ordered_json bucket_json(const LengthBucket &b) {
  nlohmann::ordered_json j;
  j["count"] = b.count;
  if (b.count == 0) {
    j["mean_doc_len"] = nullptr;
    j["mean_reference_len"] = nullptr;
  } else {
    j["mean_doc_len"] = b.mean_doc_len;
    j["mean_reference_len"] = b.mean_reference_len;
  }
  j["mean_summary_len"] = nlohmann::ordered_json::object();
  for (const auto &[system, len] : b.mean_summary_len) {
    j["mean_summary_len"][system] = len;
  }
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const std::vector<InclusionReport> &reports) {
  auto out = nlohmann::ordered_json::array();
  for (const InclusionReport &r : reports) {
    nlohmann::ordered_json j;
    j["system"] = r.system;
    j["overall"] = count_json(r.overall);
    j["per_etype"] = nlohmann::ordered_json::object();
    for (const auto &[etype, c] : r.per_etype) j["per_etype"][etype] = count_json(c);
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::ordered_json to_json(const LengthSplitReport &report) {
  nlohmann::ordered_json j;
  j["threshold"] = report.threshold;
  j["short"] = bucket_json(report.short_bucket);
  j["long"] = bucket_json(report.long_bucket);
  return j;
}

nlohmann::ordered_json to_json(const VerdictSummary &summary) {
  nlohmann::ordered_json j;
  j["systems"] = nlohmann::ordered_json::array();
  for (const SystemHallucination &s : summary.systems) {
    j["systems"].push_back({{"system", s.system},
                            {"samples", s.samples},
                            {"total", s.total},
                            {"mean_per_sample", s.mean_per_sample}});
  }
  j["per_sample"] = nlohmann::ordered_json::object();
  for (const auto &[sample, row] : summary.per_sample) {
    for (const auto &[system, count] : row) {
      j["per_sample"][sample][system] = count;
    }
  }
  return j;
}

void print_rouge_table(std::ostream &out, const std::vector<SystemRouge> &rouge) {
  fmt::print(out, "{:<24} {:>6} {:>9} {:>9} {:>9}\n", "system", "n",
             "R1-P", "R1-R", "R1-F");
  for (const SystemRouge &r : rouge) {
    fmt::print(out, "{:<24} {:>6} {:>9.4f} {:>9.4f} {:>9.4f}\n", r.system,
               r.count, r.mean.precision, r.mean.recall, r.mean.f1);
  }
}

void print_inclusion_table(std::ostream &out,
                           const std::vector<InclusionReport> &reports) {
  for (const InclusionReport &r : reports) {
    fmt::print(out, "{}: overall {}/{} = {:.3f}\n", r.system,
               r.overall.included, r.overall.total, r.overall.ratio());
    for (const auto &[etype, c] : r.per_etype) {
      fmt::print(out, "  {:<12} {:>5}/{:<5} {:.3f}\n", etype, c.included,
                 c.total, c.ratio());
    }
  }
}

void print_length_table(std::ostream &out, const LengthSplitReport &report) {
  fmt::print(out, "threshold (mean document length): {:.1f}\n",
             report.threshold);
  std::set<std::string> systems;
  for (const auto &[s, _] : report.short_bucket.mean_summary_len) systems.insert(s);
  for (const auto &[s, _] : report.long_bucket.mean_summary_len) systems.insert(s);

  fmt::print(out, "{:<8} {:>7} {:>9} {:>9}", "bucket", "count", "doc", "ref");
  for (const std::string &s : systems) fmt::print(out, " {:>12}", s);
  out << '\n';
  auto row = [&](const char *name, const LengthBucket &b) {
    fmt::print(out, "{:<8} {:>7} {:>9.1f} {:>9.1f}", name, b.count,
               b.mean_doc_len, b.mean_reference_len);
    for (const std::string &s : systems) {
      auto it = b.mean_summary_len.find(s);
      fmt::print(out, " {:>12.1f}", it == b.mean_summary_len.end() ? 0.0 : it->second);
    }
    out << '\n';
  };
  row("short", report.short_bucket);
  row("long", report.long_bucket);
}

void print_verdict_table(std::ostream &out, const VerdictSummary &summary) {
  fmt::print(out, "{:<24} {:>8} {:>8} {:>10}\n", "system", "samples", "total",
             "mean");
  for (const SystemHallucination &s : summary.systems) {
    fmt::print(out, "{:<24} {:>8} {:>8} {:>10.3f}\n", s.system, s.samples,
               s.total, s.mean_per_sample);
  }
}

}  // namespace keysum
