#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jsoniq/exec.hpp"
#include "jsoniq/parser.hpp"
#include "jsoniq/plan.hpp"

namespace jsoniq {

int default_workers();

struct EngineConfig {
  int workers = default_workers();
  std::size_t partitions = 0;  // 0 selects 2 * workers
  bool force_local = false;    // serial reference execution
  NullOrder null_order = NullOrder::Before;
  bool aggregate_pushdown = true;
  BadLinePolicy bad_lines = BadLinePolicy::Fail;
};

class CompiledQuery {
 public:
  const Ast& ast() const { return ast_; }
  const Plan& plan() const { return plan_; }
  const std::vector<std::string>& externals() const { return externals_; }
  std::string render() const { return render_plan(plan_); }
  std::string shape() const { return plan_shape(*plan_.root); }
  double parse_ms() const { return parse_ms_; }
  double plan_ms() const { return plan_ms_; }

 private:
  friend class Engine;
  Ast ast_;
  BoundVariables bound_;
  Plan plan_;
  std::vector<std::string> externals_;
  double parse_ms_ = 0;
  double plan_ms_ = 0;
};

struct Timings {
  double parse_ms = 0;
  double plan_ms = 0;
  double execute_ms = 0;
};

class Engine {
 public:
  explicit Engine(EngineConfig config = {});

  const EngineConfig& config() const { return config_; }
  std::size_t partitions() const;

  // Parse, bind, plan. Static errors are thrown as QueryError.
  CompiledQuery compile(std::string_view query,
                        const std::vector<std::string>& externals = {}) const;
  Sequence execute(const CompiledQuery& query,
                   const std::map<std::string, Sequence>& bindings = {});
  Sequence run(std::string_view query, const std::map<std::string, Sequence>& bindings = {});

  ExecStats& stats() { return stats_; }
  const Timings& last_timings() const { return timings_; }

 private:
  EngineConfig config_;
  ExecStats stats_;
  Timings timings_;
};

}  // namespace jsoniq
