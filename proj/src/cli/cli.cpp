#include "jsoniq/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace jsoniq::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw QueryError(ErrorCode::IoError, "cannot read query file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  Sequence result;
  double parse_ms = 0;
  double plan_ms = 0;
  double execute_ms = 0;
  std::string plan;
};

Outcome evaluate(Engine& engine, const std::string& query, bool want_plan) {
  Outcome o;
  CompiledQuery compiled = engine.compile(query);
  o.parse_ms = compiled.parse_ms();
  o.plan_ms = compiled.plan_ms();
  if (want_plan) o.plan = compiled.render();
  auto t1 = Clock::now();
  o.result = engine.execute(compiled);
  o.execute_ms = ms_since(t1);
  return o;
}

void print_timings(std::ostream& err, const Outcome& o, double serialize_ms) {
  err << "timings: parse " << o.parse_ms << " ms, plan " << o.plan_ms << " ms, execute " << o.execute_ms
      << " ms, serialize " << serialize_ms << " ms\n";
}

std::optional<long> env_number(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) {
    throw QueryError(ErrorCode::InvalidArgument,
                     std::string(name) + " must be a positive integer");
  }
  return n;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnresolvedVariable:
    case ErrorCode::UnsupportedFeature:
      return kSyntaxError;
    case ErrorCode::IoError:
    case ErrorCode::JsonParseError:
      return kIoError;
    default:
      return kRuntimeError;
  }
}

std::string format_error(const QueryError& error, std::string_view query) {
  std::string out = error.describe();
  const SourceSpan& span = error.span();
  if (!span.known() || span.offset > query.size()) return out;
  std::size_t begin = query.rfind('\n', span.offset == 0 ? 0 : span.offset - 1);
  begin = begin == std::string_view::npos || span.offset == 0 ? 0 : begin + 1;
  if (span.offset > 0 && query[span.offset - 1] == '\n') begin = span.offset;
  std::size_t end = query.find('\n', span.offset);
  if (end == std::string_view::npos) end = query.size();
  out += "\n  ";
  out += query.substr(begin, end - begin);
  out += "\n  ";
  out.append(span.offset - begin, ' ');
  out.append(std::max<std::size_t>(1, std::min<std::size_t>(span.length, end - span.offset)), '^');
  return out;
}

void apply_environment(EngineConfig& config) {
  if (auto w = env_number("JSONIQ_WORKERS")) config.workers = static_cast<int>(*w);
  if (auto p = env_number("JSONIQ_PARTITIONS")) config.partitions = static_cast<std::size_t>(*p);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string query;
  try {
    query = config.query_file.empty() ? config.query : read_file(config.query_file);
    Engine engine(config.engine);
    Outcome o = evaluate(engine, query, config.show_plan);
    if (config.show_plan) err << o.plan;
    auto t = Clock::now();
    std::string text = serialize(o.result, config.style);
    double serialize_ms = ms_since(t);
    if (config.output.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file || !(file << text)) {
        throw QueryError(ErrorCode::IoError, "cannot write " + config.output);
      }
    }
    if (config.timings) print_timings(err, o, serialize_ms);
    if (engine.stats().skipped_lines() > 0) {
      err << "skipped " << engine.stats().skipped_lines() << " malformed line(s)\n";
    }
    return kOk;
  } catch (const QueryError& e) {
    err << format_error(e, query) << "\n";
    return exit_code_for(e.code());
  }
}

int shell(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err,
          bool prompt) {
  bool show_plan = config.show_plan;
  bool timings = config.timings;
  std::string last_error = "no error";
  Engine engine(config.engine);
  std::string line, query;
  for (;;) {
    if (prompt) out << (query.empty() ? "jsoniq> " : "   ...> ") << std::flush;
    if (!std::getline(in, line)) break;
    if (!line.empty() && line.back() == '\\') {
      line.pop_back();
      query += line + "\n";
      continue;
    }
    query += line;
    std::string text = query;
    query.clear();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (text == ":quit" || text == ":exit") break;
    if (text == ":plan") {
      show_plan = !show_plan;
      out << "plan display " << (show_plan ? "on" : "off") << "\n";
      continue;
    }
    if (text == ":timings") {
      timings = !timings;
      out << "timings " << (timings ? "on" : "off") << "\n";
      continue;
    }
    if (text == ":error") {
      out << last_error << "\n";
      continue;
    }
    try {
      Outcome o = evaluate(engine, text, show_plan);
      if (show_plan) out << o.plan;
      auto t = Clock::now();
      std::size_t shown = std::min(config.shell_cap, o.result.size());
      for (std::size_t i = 0; i < shown; ++i) {
        out << serialize_item(o.result[i], config.style) << "\n";
      }
      if (o.result.size() > shown) {
        out << "... " << (o.result.size() - shown) << " more item(s) not shown ("
            << o.result.size() << " total)\n";
      }
      if (timings) print_timings(out, o, ms_since(t));
    } catch (const QueryError& e) {
      last_error = format_error(e, text);
      err << last_error << "\n";
    }
  }
  if (prompt) out << "\n";
  return kOk;
}

}  // namespace jsoniq::cli
