#include "support/datasets.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>

namespace testgen {

namespace fs = std::filesystem;

namespace {

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size()) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string two_digits(std::int64_t v) { return (v < 10 ? "0" : "") + std::to_string(v); }

const std::vector<std::string> kAuthors = {"alice", "bob", "carol", "dave", "erin",
                                           "frank", "grace", "heidi"};

}  // namespace

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("jsoniq-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::vector<WeatherRecord> weather_records(Rng& rng, std::size_t n) {
  static const std::vector<std::string> types = {"TMAX", "TMIN", "PRCP", "SNOW"};
  std::vector<WeatherRecord> out;
  out.reserve(n);
  while (out.size() < n) {
    std::string station = "GHCND:US" + std::to_string(10000 + rng.range(0, 399));
    std::string date = std::to_string(rng.range(2000, 2006)) + "-" + two_digits(rng.range(1, 12)) +
                       "-" + two_digits(rng.chance(0.1) ? 25 : rng.range(1, 28));
    for (const auto& type : types) {
      if (out.size() == n || !rng.chance(type[0] == 'T' ? 0.8 : 0.4)) continue;
      WeatherRecord r{date, type, station, rng.range(-300, 450), ""};
      r.line = "{\"data\":{\"date\":" + quote(r.date) + ",\"value\":" + std::to_string(r.value) +
               ",\"dataType\":" + quote(r.type) + ",\"station\":" + quote(r.station) + "}}";
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<GithubEvent> github_events(Rng& rng, std::size_t n) {
  static const std::vector<std::pair<std::string, int>> types = {
      {"PushEvent", 40}, {"WatchEvent", 20}, {"CreateEvent", 10}, {"IssuesEvent", 10},
      {"ForkEvent", 8}, {"ReleaseEvent", 7}, {"PullRequestEvent", 5}};
  const double mixed = 0.1;
  std::vector<GithubEvent> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    GithubEvent e;
    std::int64_t roll = rng.range(0, 99);
    for (const auto& [name, weight] : types) {
      if (roll < weight) {
        e.type = name;
        break;
      }
      roll -= weight;
    }
    e.login = "user" + std::to_string(rng.range(0, 4999));
    e.actor_json = "{\"login\":" + quote(e.login) + ",\"id\":" + std::to_string(rng.range(1, 99999)) + "}";
    std::string id = std::to_string(2000000 + i);
    std::string repo_name = quote("org" + std::to_string(rng.range(0, 99)) + "/repo" +
                                  std::to_string(rng.range(0, 999)));
    std::string payload;
    if (e.type == "PushEvent") {
      std::int64_t size = rng.range(1, 4);
      std::string commits;
      for (std::int64_t c = 0; c < size; ++c) {
        if (c) commits += ",";
        commits += "{\"author\":" + quote(rng.pick(kAuthors)) + ",\"sha\":" +
                   quote(std::to_string(rng.range(100000, 999999))) + "}";
      }
      std::string size_text = rng.chance(mixed) ? quote(std::to_string(size)) : std::to_string(size);
      payload = "{\"size\":" + size_text + ",\"commits\":[" + commits + "]}";
    } else if (e.type == "ReleaseEvent") {
      bool pre = rng.chance(0.5);
      bool as_string = rng.chance(mixed);
      e.prerelease = pre && !as_string;
      std::string pre_text = pre ? "true" : "false";
      if (as_string) pre_text = quote(pre_text);
      e.release_login_json = rng.chance(mixed) ? std::to_string(rng.range(1, 9999))
                                               : quote("rel" + std::to_string(rng.range(0, 99)));
      payload = "{\"release\":{\"prerelease\":" + pre_text + ",\"author\":{\"login\":" +
                e.release_login_json + "}}}";
    } else if (e.type == "IssuesEvent") {
      payload = "{\"action\":" + quote(rng.chance(0.5) ? "opened" : "closed") +
                ",\"issue\":" + (rng.chance(mixed) ? "null" : std::to_string(rng.range(1, 500))) + "}";
    } else {
      payload = "{}";
    }
    e.line = "{\"id\":" + (rng.chance(mixed) ? quote(id) : id) + ",\"type\":" + quote(e.type) +
             ",\"actor\":" + e.actor_json + ",\"repo\":" +
             (rng.chance(mixed) ? repo_name : "{\"name\":" + repo_name + "}") +
             ",\"payload\":" + payload + ",\"created_at\":" +
             quote("2015-0" + std::to_string(rng.range(1, 9)) + "-" + two_digits(rng.range(1, 28)) +
                   "T" + two_digits(rng.range(0, 23)) + ":00:00Z") +
             "}";
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<PushEvent> push_events(Rng& rng, std::size_t n) {
  std::vector<PushEvent> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PushEvent e;
    std::vector<std::string> pool = kAuthors;
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    pool.resize(static_cast<std::size_t>(rng.range(3, 5)));
    std::int64_t commits = rng.range(2, 10);
    std::string text;
    for (std::int64_t c = 0; c < commits; ++c) {
      Commit commit{rng.pick(pool), ""};
      commit.json = "{\"author\":" + quote(commit.author) + ",\"sha\":" +
                    quote(std::to_string(i) + "-" + std::to_string(c)) + "}";
      if (c) text += ",";
      text += commit.json;
      e.commits.push_back(std::move(commit));
    }
    e.line = "{\"type\":\"PushEvent\",\"commits\":[" + text +
             "],\"repository\":{\"name\":\"hello-world\",\"fork\":false},\"created_at\":\"2013-08-19\"}";
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::string> lines_of(const std::vector<WeatherRecord>& v) {
  std::vector<std::string> out;
  for (const auto& r : v) out.push_back(r.line);
  return out;
}

std::vector<std::string> lines_of(const std::vector<GithubEvent>& v) {
  std::vector<std::string> out;
  for (const auto& r : v) out.push_back(r.line);
  return out;
}

std::vector<std::string> lines_of(const std::vector<PushEvent>& v) {
  std::vector<std::string> out;
  for (const auto& r : v) out.push_back(r.line);
  return out;
}

void write_corpus_files(const TempDir& dir, std::uint64_t seed) {
  Rng rng(seed);
  write_lines(dir.file("events.jsonl"), lines_of(github_events(rng, 240)));
  write_lines(dir.file("weather.jsonl"), lines_of(weather_records(rng, 300)));
  write_lines(dir.file("pushes.jsonl"), lines_of(push_events(rng, 60)));
  write_lines(dir.file("mixed.jsonl"),
              {"1", "2.50", "-3e2", "\"x\"", "", "true", "null", "[1, [2, 3], {\"a\": 4}]",
               "{\"a\": 1, \"b\": \"two\"}", "{\"a\": [1, 2], \"c\": null}", "  ", "\"\\u00e9t\\u00e9\"",
               "{\"a\": {\"b\": {\"c\": 5}}}", "12345678901234567890123", "0.1", "-0"});
  std::vector<std::string> text;
  for (int i = 0; i < 120; ++i) {
    std::string line;
    for (std::int64_t w = rng.range(0, 6); w > 0; --w) {
      line += (line.empty() ? "" : " ") + random_string(rng, 8);
    }
    text.push_back(line);
  }
  write_lines(dir.file("lines.txt"), text);
}

std::string top_committer_query(const std::string& path) {
  return "for $e in json-file(\"" + path + "\")\n"
         "let $top-committer := (\n"
         "  for $c in $e.commits[]\n"
         "  group by $c.author\n"
         "  stable order by count($c) descending\n"
         "  return $c.author)[1]\n"
         "return [$e.commits[][$$.author eq $top-committer]]";
}

std::string weather_q0(const std::string& path) {
  return "for $r in json-file(\"" + path + "\")\n"
         "where substring($r.data.date, 6, 5) eq \"12-25\" and $r.data.date ge \"2003\"\n"
         "return $r";
}

std::string weather_q1(const std::string& path) {
  return "for $r in json-file(\"" + path + "\")\n"
         "where $r.data.dataType eq \"TMIN\"\n"
         "group by $date := $r.data.date\n"
         "order by $date\n"
         "return {\"date\": $date, \"stations\": count($r)}";
}

std::string weather_q2(const std::string& path) {
  return "avg(\n"
         "  for $r in json-file(\"" + path + "\")\n"
         "  let $d := $r.data\n"
         "  where $d.dataType = (\"TMAX\", \"TMIN\")\n"
         "  group by $station := $d.station, $date := $d.date\n"
         "  return\n"
         "    for $max in $d[$$.dataType eq \"TMAX\"].value,\n"
         "        $min in $d[$$.dataType eq \"TMIN\"].value\n"
         "    return $max - $min)";
}

std::string github_filter(const std::string& path) {
  return "for $e in json-file(\"" + path + "\")\n"
         "where $e.type eq \"ReleaseEvent\"\n"
         "where $e.payload.release.prerelease instance of boolean\n"
         "where $e.payload.release.prerelease\n"
         "return $e.payload.release.author.login";
}

std::string github_grouping(const std::string& path) {
  return "for $e in json-file(\"" + path + "\")\n"
         "group by $type := $e.type\n"
         "return {\"type\": $type, \"count\": count($e)}";
}

std::string github_sorting(const std::string& path) {
  return "for $e in json-file(\"" + path + "\")\n"
         "order by $e.actor.login\n"
         "return $e.actor";
}

std::vector<std::string> corpus_queries(const TempDir& dir) {
  const std::vector<std::string> templates = {
      // sources and navigation
      R"(count(json-file("E")))",
      R"(json-file("E").type)",
      R"(json-file("E", 5).actor.login)",
      R"(json-file("E").payload.commits[].author)",
      R"(json-file("E").payload.commits[[1]].sha)",
      R"(json-file("E")[3])",
      R"(json-file("E")[$$.type eq "ForkEvent"].id)",
      R"(json-file("E").payload.commits[][$$.author eq "bob"][2])",
      R"(json-file("E") ! $$.type)",
      R"(keys(json-file("E")[1]))",
      R"((json-file("E").id, json-file("W").data.station))",
      R"(json-file("M"))",
      R"(json-file("M")[$$ instance of object] ! keys($$))",
      R"(json-file("M").a)",
      R"(json-file("M")[] ! ($$ instance of array))",
      R"(count(text-file("T")))",
      R"(text-file("T", 3) ! string-length($$))",
      R"(sum(parallelize(1 to 1000)))",
      R"(parallelize(1 to 50, 7)[$$ gt 40])",
      R"(parallelize((1, "a", true, null, 2.5, [1], {"k": 1}), 3))",
      R"(annotate(json-file("W").data, {"date": "string", "value": "integer", "dataType": "string", "station": "string"}))",
      R"(annotate(json-file("W").data, {"value": "double", "station": "string?"}) ! $$.value)",
      // branches
      R"(if (count(json-file("E")) gt 10) then json-file("E").type else json-file("W"))",
      R"(switch (2) case 1 return json-file("W").data case 2 return json-file("E").id default return ())",
      R"(typeswitch (json-file("E")[1]) case object return json-file("E").created_at default return ())",
      // aggregates
      R"(avg(for $w in json-file("W") return $w.data.value))",
      R"((min(json-file("W").data.value), max(json-file("W").data.value)))",
      R"(sum(json-file("E").payload.commits[] ! 1))",
      R"(count(json-file("E")[$$.type eq "PushEvent"]))",
      // flwor: for, let, where, return
      R"(for $e in json-file("E") return $e.id)",
      R"(for $e in json-file("E") where $e.type eq "WatchEvent" return $e.actor)",
      R"(for $e in json-file("E") let $n := size($e.payload.commits) where $n ge 3 return {"id": $e.id, "n": $n})",
      R"(for $e in json-file("E") for $c in $e.payload.commits[] return $c.author)",
      R"(for $e in json-file("E") let $r := $e.repo return if ($r instance of object) then $r.name else $r)",
      R"(for $e in json-file("E") return {"id": $e.id, "first": $e.payload.commits[[1]].author, "tags": [$e.type, $e.actor.login]})",
      R"(for $e in json-file("E") where some $c in $e.payload.commits[] satisfies $c.author eq "alice" return $e.id)",
      R"(for $e in json-file("E") where $e.type eq "PushEvent" where every $c in $e.payload.commits[] satisfies $c.author ne "bob" return $e.id)",
      R"(for $e in json-file("E") return try { $e.payload.size + 1 } catch * { "bad" })",
      R"(for $x in parallelize(1 to 100) where $x mod 3 eq 0 return $x * $x)",
      R"(for $x in parallelize(1 to 10), $y in (1, 2) return $x * 10 + $y)",
      R"(for $x in parallelize(1 to 10) for $y in 1 to $x return $y)",
      R"(let $n := 5 for $x in parallelize(1 to 20) where $x gt $n return $x)",
      R"(for $x in parallelize((1, "a", true, null, 2.5, [1], {"k": 1})) return typeswitch ($x) case integer return "i" case string return "s" case boolean return "b" case null return "n" case decimal return "d" case array return "a" default return "o")",
      R"(count(for $l in text-file("T") where contains($l, "a") return $l))",
      R"(for $l in text-file("T") count $c return concat(string($c), ":", upper-case($l)))",
      R"(for $r in annotate(json-file("W").data, {"value": "integer", "station": "string"}) where $r.value gt 0 return $r.station)",
      // group by
      R"(for $e in json-file("E") group by $t := $e.type return {"t": $t, "n": count($e)})",
      R"(for $e in json-file("E") group by $t := $e.type order by count($e) descending, $t return $t)",
      R"(for $e in json-file("E") group by $t := $e.type return {"t": $t, "ids": [$e.id]})",
      R"(for $e in json-file("E") group by $t := $e.type, $m := substring($e.created_at, 1, 7) return [$t, $m, count($e)])",
      R"(for $e in json-file("E") group by $id := $e.id return count($e))",
      R"(for $e in json-file("E") let $c := $e.payload.commits[] group by $t := $e.type return {"t": $t, "n": count($c), "first": min($c.sha)})",
      R"(count(for $e in json-file("E") for $c in $e.payload.commits[] group by $a := $c.author return $a))",
      R"(for $e in json-file("E") where $e.type eq "PushEvent" group by $a := $e.actor.login order by $a return {"a": $a, "commits": sum(for $x in $e return size($x.payload.commits))})",
      R"(for $w in json-file("W") group by $s := $w.data.station return {"s": $s, "min": min($w.data.value), "max": max($w.data.value), "avg": avg($w.data.value)})",
      R"(for $x in parallelize(1 to 20) group by $k := $x mod 4 return {"k": $k, "xs": [$x]})",
      R"(for $x in parallelize(1 to 20) let $y := $x * 2 group by $k := $x mod 3 return sum($y))",
      R"(for $x in parallelize((1, 2, 2, "1", "1", "2", true, null)) group by $y := $x return {"key": $y, "content": [$x]})",
      R"(for $m in json-file("M") group by $k := $m instance of object return {"k": $k, "n": count($m)})",
      // order by and count
      R"(for $e in json-file("E") order by $e.actor.login descending, $e.created_at return $e.id)",
      R"(for $e in json-file("E") order by $e.payload.commits[[1]].sha empty least return $e.id)",
      R"(for $e in json-file("E") order by $e.payload.commits[[1]].sha descending empty greatest return $e.id)",
      R"(for $w in json-file("W") order by $w.data.value descending, $w.data.station return $w.data.value cast as string)",
      R"(for $x in parallelize(1 to 30, 4) order by $x mod 5, $x descending return $x)",
      R"(for $x in parallelize((3, 1, 2, 1.5, 2.5e0)) order by $x return $x)",
      R"(for $e in json-file("E") count $c where $c mod 7 eq 0 return [$c, $e.type])",
      R"(for $e in json-file("E") order by $e.created_at count $c return {"c": $c, "at": $e.created_at})",
      R"(for $e in json-file("E") where $e.type eq "PushEvent" count $c group by $a := $e.actor.login order by $a return [$a, $c])",
      // reference and benchmark queries
      top_committer_query("P"),
      weather_q0("W"),
      weather_q1("W"),
      weather_q2("W"),
      github_filter("E"),
      github_grouping("E"),
      github_sorting("E"),
  };
  std::vector<std::string> out;
  for (const auto& t : templates) out.push_back(t);
  for (auto& q : out) {
    q = replace_all(q, "\"E\"", quote(dir.file("events.jsonl")));
    q = replace_all(q, "\"W\"", quote(dir.file("weather.jsonl")));
    q = replace_all(q, "\"M\"", quote(dir.file("mixed.jsonl")));
    q = replace_all(q, "\"P\"", quote(dir.file("pushes.jsonl")));
    q = replace_all(q, "\"T\"", quote(dir.file("lines.txt")));
  }
  return out;
}

std::vector<std::string> corpus_error_queries(const TempDir& dir) {
  std::vector<std::string> out = {
      R"(for $e in json-file("E") stable order by $e.payload.size return $e.id)",
      R"(for $e in json-file("E") return $e.payload.size + 1)",
      R"(for $m in json-file("M") order by $m return $m)",
      R"(sum(json-file("E").type))",
      R"(json-file("E")[$$.payload.size gt 2])",
  };
  for (auto& q : out) q = replace_all(q, "\"E\"", quote(dir.file("events.jsonl")));
  for (auto& q : out) q = replace_all(q, "\"M\"", quote(dir.file("mixed.jsonl")));
  return out;
}

}  // namespace testgen
