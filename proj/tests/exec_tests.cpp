#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "jsoniq/engine.hpp"
#include "jsoniq/json.hpp"
#include "support/datasets.hpp"
#include "support/generators.hpp"

using namespace jsoniq;

namespace {

std::string run(const std::string& query, EngineConfig config = {}) {
  Engine engine(config);
  return serialize(engine.run(query), OutputStyle::JsonLines);
}

std::string run_local(const std::string& query) {
  EngineConfig config;
  config.force_local = true;
  return run(query, config);
}

// Serialized result, or the error code name on failure.
std::string outcome(const std::string& query, EngineConfig config) {
  try {
    return run(query, config);
  } catch (const QueryError& e) {
    return "error " + std::string(error_code_name(e.code()));
  }
}

ErrorCode error_of(const std::string& query, EngineConfig config = {}) {
  try {
    run(query, config);
  } catch (const QueryError& e) {
    return e.code();
  }
  FAIL("query succeeded: " << query);
  return ErrorCode::InvalidArgument;
}

// Checks a query in both local and parallel mode.
void check_both(const std::string& query, const std::string& expected) {
  CAPTURE(query);
  CHECK(run_local(query) == expected);
  EngineConfig parallel;
  parallel.workers = 3;
  parallel.partitions = 5;
  CHECK(run(query, parallel) == expected);
}

std::string lines(std::initializer_list<const char*> items) {
  std::string out;
  for (const char* i : items) out += std::string(i) + "\n";
  return out;
}

const char* kEvent =
    R"({"type": "PushEvent", "commits": [{"author": "john", "sha": "e230e81"}, {"author": "tom", "sha": "6d4f151"}], "repository": {"name": "hello-world", "fork": false}, "created_at": "2013-08-19"})";

}  // namespace

TEST_CASE("navigation over the figure one event") {
  std::string event = kEvent;
  check_both("(" + event + ").commits[].author", lines({R"("john")", R"("tom")"}));
  check_both("(" + event + ").commits[]",
             lines({R"({"author":"john","sha":"e230e81"})", R"({"author":"tom","sha":"6d4f151"})"}));
  check_both("(" + event + ").repository.fork", lines({"false"}));
}

TEST_CASE("object lookup skips non-objects and absent keys") {
  check_both(R"({"a":1}.a)", lines({"1"}));
  check_both(R"((1, "x").a)", "");
  check_both(R"(({"a":null}).a)", lines({"null"}));
  check_both(R"(({"b":1}).a)", "");
  check_both(R"(({"a": 1}, [1], {"a": [2]}, "a").a)", lines({"1", "[2]"}));
  check_both(R"({"a b": 3}."a b")", lines({"3"}));
  check_both(R"(let $k := "b" return {"b": 4}.$k)", lines({"4"}));
}

TEST_CASE("array unbox and access") {
  check_both("([1,[2]])[]", lines({"1", "[2]"}));
  check_both("([1,2,3])[[2]]", lines({"2"}));
  check_both("([1])[[5]]", "");
  check_both("(1, {\"a\": 1})[]", "");
  check_both("([1, 2], [3])[[1]]", lines({"1", "3"}));
}

TEST_CASE("predicates filter by position or effective boolean value") {
  check_both("(1,2,3)[$$ gt 1]", lines({"2", "3"}));
  check_both("(5,6,7)[2]", lines({"6"}));
  check_both("()[1]", "");
  check_both("(5,6,7)[1.5]", "");
  check_both("(1,2,3)[\"x\"]", lines({"1", "2", "3"}));
  check_both("(1,2,3)[false]", "");
  check_both("parallelize(1 to 10, 3)[7]", lines({"7"}));
}

TEST_CASE("count over a lookup on integers is zero") {
  check_both("count(for $p in 1 to 10 return $p.name)", lines({"0"}));
}

TEST_CASE("simple map binds the context item") {
  check_both("(1, 2, 3) ! ($$ * 10)", lines({"10", "20", "30"}));
  check_both("parallelize((1, 2), 2) ! [$$, $$]", lines({"[1,1]", "[2,2]"}));
}

TEST_CASE("constructors") {
  check_both(R"({"a": (), "b": (1, 2), "c": [()]})", lines({R"({"a":null,"b":[1,2],"c":[]})"}));
  check_both(R"([1 to 3, "x"])", lines({R"([1,2,3,"x"])"}));
  CHECK(error_of(R"({"a": 1, "a": 2})") == ErrorCode::DuplicateKey);
  CHECK(error_of(R"({1: 2})") == ErrorCode::TypeError);
}

TEST_CASE("comparisons and logic") {
  check_both("1 eq 1.0, 1 lt 2e0, \"a\" lt \"b\", null eq null", lines({"true", "true", "true", "true"}));
  check_both("(1, 2) = (2, 3), (1, 2) = 5", lines({"true", "false"}));
  check_both("() eq 1", "");
  check_both("true and not(false), false or ()", lines({"true", "false"}));
  CHECK(error_of("1 eq \"1\"") == ErrorCode::TypeError);
  CHECK(error_of("(1, 2) eq 1") == ErrorCode::TypeError);
}

TEST_CASE("arithmetic and string concatenation") {
  check_both("1 + 2, 7 idiv 2, 7 mod 3, 1 div 4, -(3)", lines({"3", "3", "1", "0.25", "-3"}));
  check_both("\"a\" || 1 || ()", lines({R"("a1")"}));
  check_both("1 + ()", "");
  CHECK(error_of("1 div 0") == ErrorCode::DivByZero);
  CHECK(error_of("1 + \"a\"") == ErrorCode::TypeError);
}

TEST_CASE("types: cast, castable, instance of and treat") {
  check_both("\"42\" cast as integer, 1 castable as string, \"x\" castable as integer",
             lines({"42", "true", "false"}));
  check_both("(1, 2) instance of integer+, () instance of integer?, [1] instance of array",
             lines({"true", "true", "true"}));
  check_both("1 treat as integer", lines({"1"}));
  CHECK(error_of("\"x\" cast as integer") == ErrorCode::CastError);
  CHECK(error_of("1 treat as string") == ErrorCode::TreatError);
}

TEST_CASE("quantified expressions") {
  check_both("some $x in (1, 2, 3) satisfies $x gt 2, every $x in (1, 2) satisfies $x gt 1",
             lines({"true", "false"}));
  check_both("every $x in () satisfies false", lines({"true"}));
}

TEST_CASE("try catch") {
  check_both("try { 1 div 0 } catch * { \"caught\" }", lines({R"("caught")"}));
  check_both("try { 1 div 0 } catch DIV_BY_ZERO { 1 } catch * { 2 }", lines({"1"}));
  check_both("try { 1 + \"a\" } catch DIV_BY_ZERO { 1 } catch * { 2 }", lines({"2"}));
  check_both("try { 3 } catch * { 4 }", lines({"3"}));
  CHECK(error_of("try { 1 + \"a\" } catch DIV_BY_ZERO { 1 }") == ErrorCode::TypeError);
}

TEST_CASE("conditionals") {
  check_both("if (()) then 1 else 2, if ((1, 2)[1]) then 3 else 4", lines({"2", "3"}));
  check_both("switch (\"b\") case \"a\" return 1 case \"b\" return 2 default return 3", lines({"2"}));
  check_both("switch (9) default return 3", lines({"3"}));
  check_both("for $x in (null, \"s\") return typeswitch ($x) case null return \"null\" "
             "case string return \"string\" default return \"other\"",
             lines({R"("null")", R"("string")"}));
  check_both("typeswitch ((1, 2)) case $n as integer+ return count($n) default return 0", lines({"2"}));
}

TEST_CASE("builtin functions") {
  check_both("count((1, 2)), sum(()), sum((1, 2.5)), avg((1, 2)), min((3, 1)), max((\"a\", \"b\"))",
             lines({"2", "0", "3.5", "1.5", "1", R"("b")"}));
  check_both("avg(()), min(())", "");
  check_both("string(1.50), concat(\"a\", 1, ()), substring(\"hello\", 2, 3), string-length(\"été\")",
             lines({R"("1.5")", R"("a1")", R"("ell")", "3"}));
  check_both("contains(\"abc\", \"b\"), starts-with(\"abc\", \"b\"), lower-case(\"AbC\"), upper-case(\"x\")",
             lines({"true", "false", R"("abc")", R"("X")"}));
  check_both("size([1, 2]), keys({\"a\": 1, \"b\": 2}), values({\"a\": 1})",
             lines({"2", R"("a")", R"("b")", "1"}));
  check_both("boolean(\"\"), not(1), abs(-2.5), round(2.5), round(-2.5)",
             lines({"false", "false", "2.5", "3.0", "-2.0"}));
  check_both("exists(()), empty(()), exists(1 to 1000000000)", lines({"false", "true", "true"}));
  CHECK(error_of("size(1)") == ErrorCode::TypeError);
  CHECK(error_of("sum((1, \"a\"))") == ErrorCode::TypeError);
}

TEST_CASE("flwor: count clause enumerates from one") {
  check_both("for $x in (1,2,3) count $c return $c", lines({"1", "2", "3"}));
  check_both("for $x in (\"a\", \"b\", \"c\") where $x ne \"b\" count $c return [$c, $x]",
             lines({R"([1,"a"])", R"([2,"c"])"}));
}

TEST_CASE("flwor: the grouping example yields six groups") {
  const std::string query =
      "for $x in (1, 2, 2, \"1\", \"1\", \"2\", true, null)\n"
      "group by $y := $x\n"
      "return {\"key\": $y, \"content\": [$x]}";
  check_both(query, lines({R"({"key":null,"content":[null]})", R"({"key":true,"content":[true]})",
                           R"({"key":1,"content":[1]})", R"({"key":2,"content":[2,2]})",
                           R"({"key":"1","content":["1","1"]})", R"({"key":"2","content":["2"]})"}));
}

TEST_CASE("flwor: group by key errors") {
  CHECK(error_of("for $x in (1, 2) group by $k := [$x] return $k") == ErrorCode::NonatomicKeyError);
  CHECK(error_of("for $x in (1, 2) group by $k := ($x, $x) return $k") == ErrorCode::MultiItemKeyError);
  EngineConfig local;
  local.force_local = true;
  CHECK(error_of("for $x in (1, 2) group by $k := [$x] return $k", local) == ErrorCode::NonatomicKeyError);
}

TEST_CASE("flwor: group by keeps empty keys apart from null") {
  check_both("for $x in ({\"a\": null}, {}, {\"a\": 1}, {}) group by $k := $x.a return [$k, count($x)]",
             lines({"[2]", "[null,1]", "[1,1]"}));
}

TEST_CASE("flwor: order by") {
  check_both("for $x in (3, 1, 2) order by $x descending return $x", lines({"3", "2", "1"}));
  check_both("for $x in ({\"k\": 2}, {}, {\"k\": 1}) order by $x.k return $x.k", lines({"1", "2"}));
  check_both("for $x in ({\"k\": 2, \"i\": 1}, {\"i\": 2}, {\"k\": 1, \"i\": 3}) order by $x.k empty least return $x.i",
             lines({"2", "3", "1"}));
  check_both("for $x in ({\"k\": 2, \"i\": 1}, {\"i\": 2}, {\"k\": 1, \"i\": 3}) order by $x.k empty greatest return $x.i",
             lines({"3", "1", "2"}));
  check_both("for $x in ({\"k\": 2, \"i\": 1}, {\"i\": 2}, {\"k\": 1, \"i\": 3}) order by $x.k descending empty greatest return $x.i",
             lines({"2", "1", "3"}));
  check_both("for $x in ([1, \"b\"], [2, \"a\"], [1, \"a\"]) stable order by $x[[1]], $x[[2]] descending return $x[[2]]",
             lines({R"("b")", R"("a")", R"("a")"}));
  check_both("for $x in (2, 1, 2, 1) count $c stable order by $x return $c", lines({"2", "4", "1", "3"}));
}

TEST_CASE("flwor: order by rejects incomparable keys") {
  CHECK(error_of("for $x in (1, \"a\") order by $x return $x") == ErrorCode::OrderIncomparable);
  EngineConfig local;
  local.force_local = true;
  CHECK(error_of("for $x in (1, \"a\") order by $x return $x", local) == ErrorCode::OrderIncomparable);
  CHECK(error_of("for $x in (1, 2) order by ($x, $x) return $x") == ErrorCode::MultiItemKeyError);
  CHECK(error_of("for $x in (1, 2) order by {\"a\": $x} return $x") == ErrorCode::NonatomicKeyError);
  try {
    run("for $x in parallelize((1, 2, true)) order by $x return $x");
    FAIL("expected an error");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::OrderIncomparable);
    CHECK(e.message().find("'$x'") != std::string::npos);
    CHECK(e.message().find("number") != std::string::npos);
    CHECK(e.message().find("boolean") != std::string::npos);
  }
}

TEST_CASE("flwor: let and for rebinding replace the old column") {
  check_both("for $x in (1, 2) let $x := $x * 10 return $x", lines({"10", "20"}));
  check_both("for $x in parallelize((1, 2)) for $x in ($x, $x + 1) return $x", lines({"1", "2", "2", "3"}));
}

TEST_CASE("flwor: the top-committer query") {
  const std::string query =
      "for $e in (" + std::string(kEvent) + ", " +
      R"({"commits": [{"author": "a", "sha": "1"}, {"author": "b", "sha": "2"}, {"author": "b", "sha": "3"}]}))" +
      "\nlet $top-committer := (\n"
      "  for $c in $e.commits[]\n"
      "  group by $c.author\n"
      "  stable order by count($c) descending\n"
      "  return $c.author)[1]\n"
      "return [$e.commits[][$$.author eq $top-committer]]";
  check_both(query, lines({R"([{"author":"john","sha":"e230e81"}])",
                           R"([{"author":"b","sha":"2"},{"author":"b","sha":"3"}])"}));
}

TEST_CASE("errors carry the originating span") {
  try {
    run("let $a := 1\nreturn $a + \"x\"");
    FAIL("expected an error");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::TypeError);
    CHECK(e.span().line == 2);
    CHECK(e.span().column == 8);
  }
}

TEST_CASE("external variables") {
  Engine engine;
  Sequence out = engine.run("$n + 1", {{"n", {Item::integer(41)}}});
  CHECK(serialize(out, OutputStyle::JsonLines) == "42\n");
  CompiledQuery q = engine.compile("$n", {"n"});
  try {
    engine.execute(q, {});
    FAIL("expected an error");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::UnresolvedVariable);
  }
}

TEST_CASE("cursor protocol") {
  Engine engine;
  CompiledQuery q = engine.compile("1 to 3");
  ExecStats stats;
  Executor ex(ExecOptions{}, stats);
  auto cursor = ex.cursor(*q.plan().root);
  ContextPtr ctx = DynamicContext::root();
  cursor->open(ctx);
  try {
    cursor->open(ctx);
    FAIL("second open accepted");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::CursorProtocol);
  }
  std::vector<std::string> seen;
  while (cursor->has_next()) seen.push_back(to_json(cursor->next()));
  CHECK(seen == std::vector<std::string>{"1", "2", "3"});
  CHECK_FALSE(cursor->has_next());
  try {
    cursor->next();
    FAIL("next past the end accepted");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::CursorProtocol);
  }
  cursor->reset(ctx);
  CHECK(to_json(cursor->next()) == "1");
  cursor->close();
  CHECK_FALSE(cursor->is_open());
  try {
    cursor->reset(ctx);
    FAIL("reset of a closed cursor accepted");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::CursorProtocol);
  }
  try {
    cursor->has_next();
    FAIL("closed cursor answered has_next");
  } catch (const QueryError& e) {
    CHECK(e.code() == ErrorCode::CursorProtocol);
  }
}

TEST_CASE("untaken branches never execute") {
  for (bool local : {true, false}) {
    CAPTURE(local);
    EngineConfig config;
    config.force_local = local;
    for (const std::string query : {
             R"(if (1 eq 1) then 1 else count(json-file("/does/not/exist")))",
             R"(if (1 eq 2) then json-file("/does/not/exist") else parallelize((1, 2)))",
             R"(switch (2) case 1 return text-file("/does/not/exist") case 2 return 5 default return json-file("/nope"))",
             R"(typeswitch ("s") case integer return json-file("/nope") default return 7)",
             R"(for $x in parallelize(1 to 4) return if ($x gt 10) then json-file("/nope") else $x)"}) {
      CAPTURE(query);
      Engine engine(config);
      CHECK_NOTHROW(engine.run(query));
      CHECK(engine.stats().source_calls() == 0);
    }
  }
}

namespace {

// Random expressions over an external $x, for reset soundness.
std::string random_expr(testgen::Rng& rng, int depth) {
  if (depth == 0) {
    switch (rng.range(0, 3)) {
      case 0: return "$x";
      case 1: return std::to_string(rng.range(-2, 5));
      case 2: return "\"s" + std::to_string(rng.range(0, 2)) + "\"";
      default: return "()";
    }
  }
  std::string a = random_expr(rng, depth - 1);
  std::string b = random_expr(rng, depth - 1);
  switch (rng.range(0, 13)) {
    case 0: return "(" + a + ", " + b + ")";
    case 1: return "(" + a + ")[]";
    case 2: return "(" + a + ").a";
    case 3: return "[" + a + "]";
    case 4: return "{\"a\": " + a + "}";
    case 5: return "count(" + a + ")";
    case 6: return "for $i in " + a + " return (" + b + ", $i)";
    case 7: return "(" + a + ")[$$ instance of integer]";
    case 8: return "if (exists(" + a + ")) then " + b + " else " + a;
    case 9: return "(" + a + ") ! [$$]";
    case 10: return "for $i in (" + a + ") group by $k := $i instance of object return count($i)";
    case 11: return "let $l := " + a + " return ($l, $l)";
    case 12: return "(" + a + ")[" + std::to_string(rng.range(1, 3)) + "]";
    default: return "for $i in (" + a + ") count $c return $c";
  }
}

std::string drain_outcome(LocalCursor& cursor, ContextPtr ctx) {
  try {
    return serialize(drain(cursor, std::move(ctx)), OutputStyle::JsonLines);
  } catch (const QueryError& e) {
    return "error " + std::string(error_code_name(e.code()));
  }
}

}  // namespace

TEST_CASE("property: reset then re-evaluate equals fresh evaluation") {
  testgen::Rng rng(11);
  for (int round = 0; round < 300; ++round) {
    std::string query = random_expr(rng, static_cast<int>(rng.range(1, 4)));
    CAPTURE(query);
    EngineConfig config;
    config.force_local = true;
    Engine engine(config);
    CompiledQuery q = engine.compile(query, {"x"});
    VarId x = 0;
    while (q.plan().vars.name(x) != "x") ++x;
    ExecStats stats;
    Executor ex(ExecOptions{}, stats);
    auto cursor = ex.cursor(*q.plan().root);
    Sequence first{testgen::random_item(rng, 2)};
    Sequence second{testgen::random_item(rng, 2), testgen::random_atomic(rng)};
    auto ctx_of = [&](const Sequence& s) {
      return DynamicContext::with_variable(DynamicContext::root(), x, s);
    };
    drain_outcome(*cursor, ctx_of(first));
    std::string reused = drain_outcome(*cursor, ctx_of(second));
    auto fresh_cursor = ex.cursor(*q.plan().root);
    CHECK(reused == drain_outcome(*fresh_cursor, ctx_of(second)));
    // Partially consumed cursors also rewind.
    cursor->open(ctx_of(first));
    if (cursor->has_next()) cursor->next();
    std::string partial = drain_outcome(*cursor, ctx_of(second));
    CHECK(partial == reused);
  }
}

TEST_CASE("property: lookup and unbox are total on heterogeneous input") {
  testgen::Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    std::vector<Item> input;
    for (std::int64_t i = rng.range(0, 6); i > 0; --i) input.push_back(testgen::random_item(rng, 3));
    Engine engine;
    CHECK_NOTHROW(engine.run("$s.a, $s[], $s.b[].c, $s[[2]]", {{"s", Sequence(input)}}));
  }
}

TEST_CASE("property: group by equals a brute-force grouping") {
  testgen::Rng rng(23);
  for (int round = 0; round < 100; ++round) {
    std::vector<Item> input;
    std::int64_t n = rng.range(0, 30);
    for (std::int64_t i = 0; i < n; ++i) {
      switch (rng.range(0, 4)) {
        case 0: input.push_back(Item::integer(rng.range(0, 3))); break;
        case 1: input.push_back(Item::string(std::to_string(rng.range(0, 3)))); break;
        case 2: input.push_back(Item::boolean(rng.chance(0.5))); break;
        case 3: input.push_back(Item::null()); break;
        default: input.push_back(Item::make_double(static_cast<double>(rng.range(0, 3)))); break;
      }
    }
    // Reference: first-seen representative per (class, value), then the
    // documented key order null < boolean < number < string.
    auto rank = [](const Item& v) {
      if (v.is_null()) return 0;
      if (v.is_boolean()) return 1;
      if (v.is_string()) return 3;
      return 2;
    };
    std::vector<std::pair<Item, std::vector<Item>>> groups;
    for (const Item& v : input) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
        if (rank(g.first) != rank(v)) return false;
        if (v.is_null()) return true;
        return compare_atomics(g.first, v, CompareOp::Eq);
      });
      if (it == groups.end()) {
        groups.push_back({v, {v}});
      } else {
        it->second.push_back(v);
      }
    }
    std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
      if (rank(a.first) != rank(b.first)) return rank(a.first) < rank(b.first);
      if (a.first.is_null()) return false;
      return compare_atomics(a.first, b.first, CompareOp::Lt);
    });
    std::string expected;
    for (const auto& [key, members] : groups) {
      expected += "[" + to_json(key) + "," + to_json(Item::array(members)) + "]\n";
    }
    for (std::size_t p : {1, 3, 7}) {
      EngineConfig config;
      config.partitions = p;
      Engine engine(config);
      std::string got = serialize(
          engine.run("for $v in parallelize($s) group by $k := $v return [$k, [$v]]", {{"s", Sequence(input)}}),
          OutputStyle::JsonLines);
      CHECK(got == expected);
    }
  }
}

TEST_CASE("property: order by equals a stable sort") {
  testgen::Rng rng(29);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::pair<std::int64_t, std::int64_t>> rows;
    for (std::int64_t i = rng.range(0, 40); i > 0; --i) rows.push_back({rng.range(0, 5), rng.range(0, 99)});
    std::vector<Item> input;
    for (const auto& [k, v] : rows) input.push_back(Item::array({Item::integer(k), Item::integer(v)}));
    bool descending = rng.chance(0.5);
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
      return descending ? a.first > b.first : a.first < b.first;
    });
    std::string expected;
    for (const auto& [k, v] : sorted) expected += std::to_string(v) + "\n";
    std::string query = std::string("for $r in parallelize($s) order by $r[[1]]") +
                        (descending ? " descending" : "") + " return $r[[2]]";
    for (std::size_t p : {1, 2, 7}) {
      EngineConfig config;
      config.partitions = p;
      Engine engine(config);
      CHECK(serialize(engine.run(query, {{"s", Sequence(input)}}), OutputStyle::JsonLines) == expected);
    }
  }
}

TEST_CASE("property: forced-local and parallel results are identical on the corpus") {
  testgen::TempDir dir("exec");
  testgen::write_corpus_files(dir, 41);
  auto queries = testgen::corpus_queries(dir);
  auto errors = testgen::corpus_error_queries(dir);
  queries.insert(queries.end(), errors.begin(), errors.end());
  for (const auto& query : queries) {
    CAPTURE(query);
    EngineConfig local;
    local.force_local = true;
    std::string expected = outcome(query, local);
    for (std::size_t p : {1, 2, 3, 7, 16}) {
      for (int w : {1, 4}) {
        EngineConfig parallel;
        parallel.partitions = p;
        parallel.workers = w;
        CHECK(outcome(query, parallel) == expected);
      }
    }
  }
}

TEST_CASE("property: aggregate pushdown does not change results") {
  testgen::TempDir dir("exec");
  testgen::write_corpus_files(dir, 43);
  for (const auto& query : testgen::corpus_queries(dir)) {
    CAPTURE(query);
    for (bool local : {true, false}) {
      EngineConfig with;
      with.force_local = local;
      EngineConfig without = with;
      without.aggregate_pushdown = false;
      CHECK(outcome(query, with) == outcome(query, without));
    }
  }
  // Random group-by queries whose non-grouping variables feed aggregates.
  testgen::Rng rng(47);
  const std::vector<std::string> aggregates = {"count", "sum", "avg", "min", "max"};
  for (int round = 0; round < 150; ++round) {
    std::string agg = rng.pick(aggregates);
    std::string var = rng.chance(0.5) ? "$x" : "$y";
    std::string ret = rng.chance(0.3) ? "[$k, " + agg + "(" + var + "), " + var + "]"
                                      : "[$k, " + agg + "(" + var + ")]";
    std::string where = rng.chance(0.3) ? " where " + agg + "(" + var + ") ge 2" : "";
    std::string query = "for $x in parallelize($s) let $y := ($x, $x mod 2)[" +
                        std::to_string(rng.range(1, 3)) + "] group by $k := $x mod " +
                        std::to_string(rng.range(1, 4)) + where + " return " + ret;
    std::vector<Item> input;
    for (std::int64_t i = rng.range(0, 25); i > 0; --i) {
      input.push_back(rng.chance(0.2) ? Item::make_double(rng.real(-5, 5)) : Item::integer(rng.range(-9, 9)));
    }
    CAPTURE(query);
    auto result = [&](bool pushdown) {
      EngineConfig config;
      config.aggregate_pushdown = pushdown;
      config.partitions = 3;
      Engine engine(config);
      try {
        return serialize(engine.run(query, {{"s", Sequence(input)}}), OutputStyle::JsonLines);
      } catch (const QueryError& e) {
        return "error " + std::string(error_code_name(e.code()));
      }
    };
    CHECK(result(true) == result(false));
  }
}

TEST_CASE("worker count does not change error selection") {
  testgen::TempDir dir("exec");
  testgen::write_corpus_files(dir, 53);
  for (const auto& query : testgen::corpus_error_queries(dir)) {
    CAPTURE(query);
    std::string messages;
    for (int w : {1, 2, 4}) {
      EngineConfig config;
      config.workers = w;
      config.partitions = 7;
      try {
        run(query, config);
        FAIL("query succeeded");
      } catch (const QueryError& e) {
        if (messages.empty()) messages = e.describe();
        CHECK(e.describe() == messages);
      }
    }
  }
}
