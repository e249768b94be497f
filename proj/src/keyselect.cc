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

#include "keysum/keyselect.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "keysum/error.h"
#include "keysum/jsonl.h"

namespace keysum {

double EntityTypeStats::ratio() const {
  if (dialogue_count == 0) return 0.0;
  return static_cast<double>(summary_count) /
         static_cast<double>(dialogue_count);
}

std::string EntityTypeStats::ratio_text() const {
  if (dialogue_count == 0) return format_ratio(0, 1, 3);
  return format_ratio(summary_count, dialogue_count, 3);
}

std::string format_ratio(std::size_t num, std::size_t den, int digits) {
  if (den == 0) throw Error("format_ratio: zero denominator");
  unsigned long long scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const unsigned long long scaled = num * scale;
  unsigned long long q = scaled / den;
  const unsigned long long r = scaled % den;
  if (2 * r > den || (2 * r == den && q % 2 == 1)) ++q;

  std::string out = std::to_string(q / scale);
  if (digits > 0) {
    std::string frac = std::to_string(q % scale);
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - frac.size(), '0');
    out += frac;
  }
  return out;
}

namespace {

// a/b > c/d for nonnegative integers with b, d > 0.
bool ratio_greater(const EntityTypeStats &x, const EntityTypeStats &y) {
  const auto lhs = static_cast<unsigned long long>(x.summary_count) *
                   y.dialogue_count;
  const auto rhs = static_cast<unsigned long long>(y.summary_count) *
                   x.dialogue_count;
  return lhs > rhs;
}

bool stats_order(const EntityTypeStats &x, const EntityTypeStats &y) {
  if (ratio_greater(x, y)) return true;
  if (ratio_greater(y, x)) return false;
  if (x.dialogue_count != y.dialogue_count) {
    return x.dialogue_count > y.dialogue_count;
  }
  return x.etype < y.etype;
}

}  // namespace

std::vector<EntityTypeStats> compute_type_stats(
    const std::vector<Sample> &samples, const std::vector<EntitySpan> &spans) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < samples.size(); ++i) index[samples[i].id] = i;

  std::map<std::string, std::set<std::size_t>> in_document;
  std::map<std::string, std::set<std::size_t>> in_summary;
  for (const EntitySpan &span : spans) {
    auto it = index.find(span.sample_id);
    if (it == index.end()) {
      throw Error("span references unknown sample '" + span.sample_id + "'");
    }
    if (span.role == EntityRole::kDocument) {
      in_document[span.etype].insert(it->second);
    } else if (span.role == EntityRole::kSummary) {
      in_summary[span.etype].insert(it->second);
    }
  }

  std::vector<EntityTypeStats> rows;
  for (const auto &[etype, docs] : in_document) {
    auto s = in_summary.find(etype);
    rows.push_back({etype, docs.size(), s == in_summary.end() ? 0 : s->second.size()});
  }
  std::sort(rows.begin(), rows.end(), stats_order);
  return rows;
}

void SelectionConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error("selection threshold must be in [0, 1], got " +
                std::to_string(threshold));
  }
}

std::vector<std::string> select_types(const std::vector<EntityTypeStats> &stats,
                                      const SelectionConfig &config) {
  config.validate();
  if (config.explicit_types) return *config.explicit_types;

  std::vector<EntityTypeStats> kept;
  for (const EntityTypeStats &row : stats) {
    if (row.dialogue_count > 0 && row.ratio() > config.threshold) {
      kept.push_back(row);
    }
  }
  std::sort(kept.begin(), kept.end(), stats_order);
  std::vector<std::string> out;
  out.reserve(kept.size());
  for (const EntityTypeStats &row : kept) out.push_back(row.etype);
  return out;
}

void write_stats_tsv(std::ostream &out,
                     const std::vector<EntityTypeStats> &stats) {
  out << "etype\tratio\tdialogue\tsummary\n";
  for (const EntityTypeStats &row : stats) {
    out << row.etype << '\t' << row.ratio_text() << '\t' << row.dialogue_count
        << '\t' << row.summary_count << '\n';
  }
}

void write_stats_json(std::ostream &out,
                      const std::vector<EntityTypeStats> &stats,
                      std::size_t corpus_size) {
  jsonl::OrderedJson j;
  j["corpus_size"] = corpus_size;
  j["rows"] = jsonl::OrderedJson::array();
  for (const EntityTypeStats &row : stats) {
    jsonl::OrderedJson r;
    r["etype"] = row.etype;
    r["ratio"] = row.ratio_text();
    r["dialogue_count"] = row.dialogue_count;
    r["summary_count"] = row.summary_count;
    j["rows"].push_back(std::move(r));
  }
  out << j.dump(2) << '\n';
}

}  // namespace keysum
