#include "jsoniq/engine.hpp"

#include <omp.h>

#include <chrono>

namespace jsoniq {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

int default_workers() { return std::max(1, omp_get_num_procs()); }

Engine::Engine(EngineConfig config) : config_(config) {
  if (config_.workers < 1) throw QueryError(ErrorCode::InvalidArgument, "workers must be >= 1");
}

std::size_t Engine::partitions() const {
  return config_.partitions ? config_.partitions : 2 * static_cast<std::size_t>(config_.workers);
}

CompiledQuery Engine::compile(std::string_view query,
                              const std::vector<std::string>& externals) const {
  CompiledQuery q;
  auto start = std::chrono::steady_clock::now();
  q.ast_ = parse_query(query);
  q.parse_ms_ = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  q.bound_ = bind_variables(q.ast_, externals);
  q.plan_ = translate(q.ast_, q.bound_.table);
  if (config_.aggregate_pushdown) rewrite_aggregate_pushdown(q.plan_);
  assign_modes(q.plan_, config_.force_local);
  q.externals_ = externals;
  q.plan_ms_ = elapsed_ms(start);
  return q;
}

Sequence Engine::execute(const CompiledQuery& query, const std::map<std::string, Sequence>& bindings) {
  auto start = std::chrono::steady_clock::now();
  std::vector<std::pair<VarId, Sequence>> values;
  for (std::size_t i = 0; i < query.externals_.size(); ++i) {
    auto it = bindings.find(query.externals_[i]);
    if (it == bindings.end()) {
      throw QueryError(ErrorCode::UnresolvedVariable,
                       "no value bound for external variable $" + query.externals_[i]);
    }
    values.emplace_back(query.bound_.externals[i], it->second);
  }
  ContextPtr ctx = DynamicContext::with_variables(DynamicContext::root(), std::move(values));
  ExecOptions options{config_.workers, partitions(), config_.null_order, config_.bad_lines};
  Executor executor(options, stats_);
  Sequence result = executor.evaluate(*query.plan_.root, ctx);
  timings_.execute_ms = elapsed_ms(start);
  return result;
}

Sequence Engine::run(std::string_view query, const std::map<std::string, Sequence>& bindings) {
  std::vector<std::string> names;
  for (const auto& [name, _] : bindings) names.push_back(name);
  CompiledQuery q = compile(query, names);
  Sequence result = execute(q, bindings);
  timings_.parse_ms = q.parse_ms();
  timings_.plan_ms = q.plan_ms();
  return result;
}

}  // namespace jsoniq
