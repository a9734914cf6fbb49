#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "jsoniq/engine.hpp"
#include "jsoniq/json.hpp"

namespace jsoniq::cli {

struct RunConfig {
  std::string query;       // query text; ignored when query_file is set
  std::string query_file;
  std::string output;      // empty for stdout
  OutputStyle style = OutputStyle::JsonLines;
  EngineConfig engine;
  bool show_plan = false;
  bool timings = false;
  std::size_t shell_cap = 20;
};

enum ExitCode { kOk = 0, kRuntimeError = 1, kSyntaxError = 2, kIoError = 3 };

int exit_code_for(ErrorCode code);

// "CODE at line:col: message" followed by the query line and a caret.
std::string format_error(const QueryError& error, std::string_view query);

// Batch mode: nothing is written to the output unless the query succeeds.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Interactive loop: one query per line ('\' at the end continues the
// query), ":quit" or end of input to leave, ":plan" and ":timings" toggle
// diagnostics, ":error" shows the last error.
int shell(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err,
          bool prompt = true);

// Workers/partitions from JSONIQ_WORKERS and JSONIQ_PARTITIONS when set.
void apply_environment(EngineConfig& config);

}  // namespace jsoniq::cli
