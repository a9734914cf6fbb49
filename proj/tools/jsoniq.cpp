#include <unistd.h>

#include <iostream>

#include "CLI11.hpp"
#include "jsoniq/cli.hpp"

int main(int argc, char** argv) {
  using namespace jsoniq;
  cli::RunConfig config;
  try {
    cli::apply_environment(config.engine);
  } catch (const QueryError& e) {
    std::cerr << e.describe() << "\n";
    return cli::kRuntimeError;
  }

  CLI::App app{"JSONiq query engine over JSON Lines files"};
  std::string style = "json-lines";
  std::string bad_lines = "fail";
  std::string null_order = "before";
  std::size_t partitions = 0;
  app.add_option("-q,--query", config.query, "Query text");
  app.add_option("--query-file", config.query_file, "File holding the query")->check(CLI::ExistingFile);
  app.add_option("-o,--output", config.output, "Output file (default: stdout)");
  app.add_option("--output-style", style, "json-lines or pretty")
      ->check(CLI::IsMember({"json-lines", "pretty"}));
  app.add_option("--workers", config.engine.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--partitions", partitions, "Default partition count (0: 2 x workers)");
  app.add_flag("--force-local", config.engine.force_local, "Serial reference execution");
  app.add_flag("--show-plan", config.show_plan, "Print the annotated plan to stderr");
  app.add_flag("--timings", config.timings, "Print phase timings to stderr");
  app.add_option("--on-bad-line", bad_lines, "Malformed JSON lines: fail or skip")
      ->check(CLI::IsMember({"fail", "skip"}));
  app.add_option("--null-order", null_order, "Position of null keys: before or after")
      ->check(CLI::IsMember({"before", "after"}));
  app.add_option("--shell-cap", config.shell_cap, "Items shown per query in the shell");
  CLI11_PARSE(app, argc, argv);

  if (partitions > 0) config.engine.partitions = partitions;
  config.style = style == "pretty" ? OutputStyle::Pretty : OutputStyle::JsonLines;
  config.engine.bad_lines = bad_lines == "skip" ? BadLinePolicy::Skip : BadLinePolicy::Fail;
  config.engine.null_order = null_order == "after" ? NullOrder::After : NullOrder::Before;

  if (config.query.empty() && config.query_file.empty()) {
    return cli::shell(config, std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0);
  }
  return cli::run(config, std::cout, std::cerr);
}
