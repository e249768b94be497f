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

#include <sys/wait.h>

#include <cstdlib>

#include "doctest.h"
#include "fixtures.h"

using keysum::testing::fs::path;
using keysum::testing::read_text;
using keysum::testing::TempDir;
using keysum::testing::write_text;

namespace {

struct Run {
  int status;
  std::string err;
};

Run keysum_cli(const std::string &args, const TempDir &dir) {
  const path err = dir / "stderr.txt";
  const std::string cmd = std::string(KEYSUM_CLI) + " " + args + " > " +
                          (dir / "stdout.txt").string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_text(err)};
}

std::string fixture(const std::string &name) {
  return (keysum::testing::data_dir() / "data" / "build" / name).string();
}

}  // namespace

TEST_CASE("successful subcommands exit 0") {
  TempDir dir;
  const std::string base = " --corpus " + fixture("corpus.jsonl") + " --spans " +
                           fixture("spans.jsonl") + " --out " + (dir / "o").string();
  CHECK(keysum_cli("analyze" + base, dir).status == 0);
  CHECK(read_text(dir / "o" / "entity_stats.tsv").starts_with("etype\tratio"));
  CHECK(keysum_cli("build --seed 3 --cap 2 --set epochs=1" + base, dir).status == 0);
  CHECK(read_text(dir / "o" / "finetune_config.json").find("\"epochs\": 1") !=
        std::string::npos);
  CHECK(keysum_cli("validate" + base, dir).status == 0);
  CHECK(keysum_cli("finetune-config --out " + (dir / "f").string(), dir).status == 0);
  CHECK(keysum_cli("--help", dir).status == 0);
}

TEST_CASE("flags override the config file") {
  TempDir dir;
  write_text(dir / "cfg.json",
             "{\"corpus\": \"" + fixture("corpus.jsonl") + "\", \"spans\": \"" +
                 fixture("spans.jsonl") + "\", \"threshold\": 0.99}");
  CHECK(keysum_cli("select --config " + (dir / "cfg.json").string() +
                       " --threshold 0.5 --out " + (dir / "o").string(),
                   dir)
            .status == 0);
  CHECK(read_text(dir / "o" / "selected_types.json").find("\"threshold\": 0.5") !=
        std::string::npos);
}

TEST_CASE("errors exit nonzero and leave no output") {
  TempDir dir;
  const std::string out = " --out " + (dir / "o").string();
  auto missing = keysum_cli("analyze --corpus " + (dir / "nope.jsonl").string() +
                                " --spans " + fixture("spans.jsonl") + out,
                            dir);
  CHECK(missing.status == 1);
  CHECK(missing.err.find("nope.jsonl") != std::string::npos);

  write_text(dir / "corrupt.jsonl",
             "{\"fname\":\"a\",\"dialogue\":\"Hi.\",\"summary\":\"x\"}\n{broken\n");
  auto corrupt = keysum_cli("build --corpus " + (dir / "corrupt.jsonl").string() + out,
                            dir);
  CHECK(corrupt.status == 1);
  CHECK(corrupt.err.find("corrupt.jsonl:2:") != std::string::npos);
  CHECK_FALSE(keysum::testing::fs::exists(dir / "o"));

  write_text(dir / "empty.jsonl", "");
  CHECK(keysum_cli("tag --corpus " + (dir / "corrupt.jsonl").string() +
                       " --gazetteer " + fixture("gazetteer.tsv") + out,
                   dir)
            .status == 1);
  CHECK_FALSE(keysum::testing::fs::exists(dir / "o" / "spans.jsonl"));

  CHECK(keysum_cli("analyze --threshold 2" + out, dir).status != 0);
  CHECK(keysum_cli("frobnicate", dir).status != 0);
  CHECK(keysum_cli("", dir).status != 0);
}

TEST_CASE("validate exits 1 on invalid spans") {
  TempDir dir;
  write_text(dir / "bad.jsonl",
             "{\"sample_id\":\"dev_1\",\"role\":\"document\",\"start_char\":0,"
             "\"end_char\":3,\"etype\":\"PERSON\",\"surface\":\"Tom\",\"source\":\"x\"}\n");
  auto r = keysum_cli("validate --corpus " + fixture("corpus.jsonl") + " --spans " +
                          (dir / "bad.jsonl").string() + " --out " +
                          (dir / "o").string(),
                      dir);
  CHECK(r.status == 1);
  CHECK(r.err.find("span record 1") != std::string::npos);
}

TEST_CASE("tag on an empty corpus writes an empty file") {
  TempDir dir;
  write_text(dir / "empty.jsonl", "");
  CHECK(keysum_cli("tag --corpus " + (dir / "empty.jsonl").string() +
                       " --gazetteer " + fixture("gazetteer.tsv") + " --out " +
                       (dir / "o").string(),
                   dir)
            .status == 0);
  CHECK(read_text(dir / "o" / "spans.jsonl").empty());
}
