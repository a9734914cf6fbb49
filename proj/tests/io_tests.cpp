#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "jsoniq/engine.hpp"
#include "jsoniq/io.hpp"
#include "jsoniq/json.hpp"
#include "support/datasets.hpp"
#include "support/generators.hpp"

using namespace jsoniq;
using testgen::Rng;
using testgen::TempDir;

namespace {

void write_raw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string text(const Sequence& seq) { return serialize(seq, OutputStyle::JsonLines); }

Sequence read_json(const std::string& pattern, std::size_t partitions, SourceOptions options = {}) {
  return collect(json_file(pattern, partitions, options), WorkerPool(2));
}

Sequence read_text(const std::string& pattern, std::size_t partitions) {
  return collect(text_file(pattern, partitions, {}), WorkerPool(2));
}

QueryError error_from(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const QueryError& e) {
    return e;
  }
  FAIL("no error");
  return QueryError(ErrorCode::InvalidArgument, "");
}

const char* kEvent =
    R"({"type": "PushEvent", "commits": [{"author": "john", "sha": "e230e81"}, {"author": "tom", "sha": "6d4f151"}], "repository": {"name": "hello-world", "fork": false}, "created_at": "2013-08-19"})";

}  // namespace

TEST_CASE("json-file reads one item per line") {
  TempDir dir("io");
  testgen::write_lines(dir.file("events.jsonl"), {kEvent, kEvent, kEvent});
  Sequence items = read_json(dir.file("events.jsonl"), 2);
  REQUIRE(items.size() == 3);
  CHECK(items[0].is_object());
  CHECK(items[0].member("commits")->as_array().size() == 2);
  write_raw(dir.file("empty.jsonl"), "");
  CHECK(read_json(dir.file("empty.jsonl"), 4).empty());
}

TEST_CASE("json-file skips blank lines and handles CRLF and a missing final newline") {
  TempDir dir("io");
  write_raw(dir.file("a.jsonl"), "1\r\n\r\n  \n[2]\n{\"a\": 3}");
  CHECK(text(read_json(dir.file("a.jsonl"), 3)) == "1\n[2]\n{\"a\":3}\n");
}

TEST_CASE("text-file returns each line as a string") {
  TempDir dir("io");
  write_raw(dir.file("t.txt"), "first\nsecond\n");
  CHECK(text(read_text(dir.file("t.txt"), 2)) == "\"first\"\n\"second\"\n");
  write_raw(dir.file("u.txt"), "\xc3\xa9t\xc3\xa9 \xe2\x82\xac\n\nlast");
  CHECK(text(read_text(dir.file("u.txt"), 5)) == "\"\xc3\xa9t\xc3\xa9 \xe2\x82\xac\"\n\"\"\n\"last\"\n");
}

TEST_CASE("patterns select files in name order") {
  TempDir dir("io");
  std::filesystem::create_directories(dir.path() / "sub");
  write_raw(dir.file("b.jsonl"), "2\n");
  write_raw(dir.file("a.jsonl"), "1\n");
  write_raw(dir.file("c.txt"), "3\n");
  write_raw(dir.file("sub/d.jsonl"), "4\n");
  write_raw(dir.file("sub/.hidden"), "5\n");
  write_raw(dir.file("sub/_SUCCESS"), "");
  CHECK(text(read_json(dir.file("*.jsonl"), 1)) == "1\n2\n");
  CHECK(text(read_json(dir.file("?.*"), 3)) == "1\n2\n3\n");
  CHECK(text(read_json(dir.file("sub"), 2)) == "4\n");
  CHECK(text(read_json(dir.file("*/d.jsonl"), 2)) == "4\n");
  CHECK(expand_pattern(dir.file("*.none")).empty());
  CHECK(error_from([&] { expand_pattern(dir.file("missing.jsonl")); }).code() == ErrorCode::IoError);
}

TEST_CASE("malformed lines fail with file and line by default") {
  TempDir dir("io");
  write_raw(dir.file("bad.jsonl"), "1\n2\n{oops\n4\n");
  QueryError e = error_from([&] { read_json(dir.file("bad.jsonl"), 2); });
  CHECK(e.code() == ErrorCode::JsonParseError);
  CHECK(e.message().find("bad.jsonl line 3") != std::string::npos);
}

TEST_CASE("malformed lines can be skipped and counted") {
  TempDir dir("io");
  write_raw(dir.file("bad.jsonl"), "1\n{oops\n3\n[\n");
  ExecStats stats;
  SourceOptions options{BadLinePolicy::Skip, &stats};
  CHECK(text(read_json(dir.file("bad.jsonl"), 3, options)) == "1\n3\n");
  CHECK(stats.skipped_lines() == 2);
  CHECK(stats.source_calls() == 1);
}

TEST_CASE("split files cover every byte exactly once") {
  TempDir dir("io");
  write_raw(dir.file("a"), "0123456789");
  write_raw(dir.file("b"), "abc");
  auto splits = split_files({dir.file("a"), dir.file("b")}, 4);
  REQUIRE(splits.size() == 4);
  std::uint64_t covered = 0;
  for (const auto& part : splits) {
    for (const auto& r : part) covered += r.end - r.begin;
  }
  CHECK(covered == 13);
}

TEST_CASE("property: json-file content is independent of the partition count") {
  Rng rng(13);
  TempDir dir("io");
  for (int round = 0; round < 60; ++round) {
    std::vector<std::string> expected;
    std::string content;
    std::size_t files = static_cast<std::size_t>(rng.range(1, 3));
    for (std::size_t f = 0; f < files; ++f) {
      std::string body;
      for (std::int64_t i = rng.range(0, 25); i > 0; --i) {
        if (rng.chance(0.1)) {
          body += rng.chance(0.5) ? "\n" : "   \n";
          continue;
        }
        Item item = testgen::random_item(rng, 2);
        expected.push_back(to_json(item));
        body += to_json(item) + (rng.chance(0.2) ? "\r\n" : "\n");
      }
      if (!body.empty() && rng.chance(0.3)) body.pop_back();
      write_raw(dir.file("f" + std::to_string(round) + "_" + std::to_string(f) + ".jsonl"), body);
    }
    std::string want;
    for (const auto& e : expected) want += e + "\n";
    std::string pattern = dir.file("f" + std::to_string(round) + "_*.jsonl");
    for (std::size_t p : {1, 2, 3, 7, 16, 64}) {
      CAPTURE(p);
      CHECK(text(read_json(pattern, p)) == want);
    }
  }
}

TEST_CASE("parallelize keeps the sequence and validates the partition count") {
  Engine engine;
  CHECK(text(engine.run("parallelize((1, 2, 3), 2)")) == "1\n2\n3\n");
  CHECK(text(engine.run("parallelize((), 4)")).empty());
  CHECK(text(engine.run("count(parallelize(1 to 1000))")) == "1000\n");
  CHECK(error_from([&] { engine.run("parallelize((1, 2), 0)"); }).code() == ErrorCode::InvalidArgument);
  CHECK(error_from([&] { engine.run("parallelize((1, 2), \"x\")"); }).code() == ErrorCode::InvalidArgument);
}

TEST_CASE("annotate coerces items against the schema") {
  Schema schema = parse_schema(parse_json_line(R"({"type": "string", "created_at": "string"})"));
  Item event = parse_json_line(kEvent);
  CHECK(to_json(annotate_item(event, schema, 1)) == R"({"type":"PushEvent","created_at":"2013-08-19"})");

  Schema ints = parse_schema(parse_json_line(R"({"n": "integer", "d": "double?", "tags?": ["string"]})"));
  CHECK(to_json(annotate_item(parse_json_line(R"({"n": "42", "d": 1})"), ints, 1)) == R"({"n":42,"d":1.0E0})");
  CHECK(to_json(annotate_item(parse_json_line(R"({"n": null, "tags": ["a", 1]})"), ints, 1)) ==
        R"({"n":null,"tags":["a","1"]})");

  QueryError missing = error_from([&] { annotate_item(parse_json_line(R"({"d": 1})"), ints, 7); });
  CHECK(missing.code() == ErrorCode::AnnotateError);
  CHECK(missing.message() == "item 7 at $.n: missing field");
  QueryError wrong = error_from([&] { annotate_item(parse_json_line(R"({"n": [1]})"), ints, 2); });
  CHECK(wrong.code() == ErrorCode::AnnotateError);
  CHECK(wrong.message().find("$.n") != std::string::npos);

  CHECK(error_from([] { parse_schema(parse_json_line(R"({"a": "widget"})")); }).code() ==
        ErrorCode::InvalidArgument);
  CHECK(error_from([] { parse_schema(parse_json_line(R"(["integer"])")); }).code() ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("annotate builds one column per field") {
  WorkerPool pool(2);
  Sequence events{parse_json_line(kEvent), parse_json_line(R"({"type": "WatchEvent"})")};
  Schema schema = parse_schema(parse_json_line(R"({"type": "string", "created_at": "string?"})"));
  TupleFrame frame = annotate_frame(partition_sequence(events, 2), schema, pool);
  CHECK(frame.names == std::vector<std::string>{"type", "created_at"});
  std::vector<Tuple> rows;
  for (auto& part : materialize(frame, pool)) rows.insert(rows.end(), part.begin(), part.end());
  REQUIRE(rows.size() == 2);
  CHECK(text(rows[0][1]) == "\"2013-08-19\"\n");
  CHECK(rows[1][1].empty());
}

TEST_CASE("annotate reports the global item index") {
  Engine engine;
  QueryError e = error_from([&] {
    engine.run(R"(annotate(parallelize(({"a": 1}, {"a": 2}, {"a": "x"}, {"a": 4}), 3), {"a": "integer"}))");
  });
  CHECK(e.code() == ErrorCode::AnnotateError);
  CHECK(e.message().find("item 3 at $.a") != std::string::npos);
}

TEST_CASE("property: annotate preserves the item count") {
  Rng rng(19);
  Schema schema = parse_schema(parse_json_line(R"({"a": "double?", "b": "string?"})"));
  for (int round = 0; round < 100; ++round) {
    std::vector<Item> items;
    for (std::int64_t i = rng.range(0, 20); i > 0; --i) {
      std::vector<std::pair<std::string, Item>> members;
      if (rng.chance(0.7)) members.emplace_back("a", Item::integer(rng.range(-5, 5)));
      if (rng.chance(0.7)) members.emplace_back("b", testgen::random_atomic(rng));
      items.push_back(Item::object(std::move(members)));
    }
    WorkerPool pool(2);
    Sequence out = collect(annotate(partition_sequence(Sequence(items), 3), schema, pool), pool);
    CHECK(out.size() == items.size());
  }
}

TEST_CASE("serialization styles") {
  Sequence seq{Item::integer(1), Item::string("a"), Item::null()};
  CHECK(serialize(seq, OutputStyle::JsonLines) == "1\n\"a\"\nnull\n");
  Item nested = parse_json_line(R"({"a": [1, {"b": null}], "c": {}})");
  CHECK(serialize_item(nested, OutputStyle::Pretty) ==
        "{\n  \"a\": [\n    1,\n    {\n      \"b\": null\n    }\n  ],\n  \"c\": {}\n}");
  Item event = parse_json_line(kEvent);
  CHECK(parse_json_line(to_json(event)) == event);
  CHECK(to_json(parse_json_line("1e2")) == "1.0E2");
}

TEST_CASE("sources record opened files and lines read") {
  TempDir dir("io");
  write_raw(dir.file("a.jsonl"), "1\n2\n3\n");
  ExecStats stats;
  read_json(dir.file("a.jsonl"), 2, SourceOptions{BadLinePolicy::Fail, &stats});
  CHECK(stats.lines_read() == 3);
  CHECK(!stats.opened_files().empty());
  stats.reset();
  CHECK(stats.lines_read() == 0);
}
