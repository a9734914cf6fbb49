#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "jsoniq/exec.hpp"

namespace jsoniq::detail {

// Scalar builtins with fully evaluated arguments.
Sequence call_builtin(Builtin id, const std::vector<Sequence>& args);

std::optional<AggregateKind> aggregate_kind(Builtin id);

ContextPtr bind_tuple(const ContextPtr& outer, const std::vector<VarId>& columns, const Tuple& t);

// Predicate filter rule: a single numeric result selects by position,
// anything else by effective boolean value.
bool predicate_keeps(const Sequence& result, std::uint64_t position);

// Items selected by a lookup, unbox or array access step from one input item.
void lookup_step(const Item& item, const std::string& key, const ItemSink& sink);
void unbox_step(const Item& item, const ItemSink& sink);
void access_step(const Item& item, const std::optional<std::int64_t>& index, const ItemSink& sink);
std::string lookup_key(const Sequence& key);
std::optional<std::int64_t> access_index(const Sequence& index);

using EvalChild = std::function<Sequence(std::size_t child, const ContextPtr& ctx)>;

struct Branch {
  std::size_t child;
  ContextPtr ctx;
};

// Selected result branch of an if, switch or typeswitch node.
Branch choose_branch(const PlanNode& node, const ContextPtr& ctx, const EvalChild& eval);

// Tuple stream of a Local FLWOR clause.
class TupleCursor {
 public:
  virtual ~TupleCursor() = default;
  virtual void open(const ContextPtr& outer) = 0;
  virtual bool next(Tuple& out) = 0;
};

std::unique_ptr<TupleCursor> make_tuple_cursor(const Executor& ex, const PlanNode& clause);
std::unique_ptr<LocalCursor> make_return_cursor(const Executor& ex, const PlanNode& ret);
std::unique_ptr<LocalCursor> make_expr_cursor(const Executor& ex, const PlanNode& node);
// Collects the partitioned interface of the node on open.
std::unique_ptr<LocalCursor> make_materialize_cursor(const Executor& ex, const PlanNode& node);

// Validated partition-count argument of the source functions.
std::size_t partition_count(const Sequence& s);

// Closure factories shared by the local and partitioned FLWOR paths.
Factory<TupleFn> tuple_closure(const Executor& ex, const PlanNode& expr, ContextPtr outer,
                               std::vector<VarId> columns);
Factory<KeyFn> key_closure(const Executor& ex, const PlanNode& clause, ContextPtr outer,
                           std::vector<VarId> columns);
GroupKernel group_kernel(const Executor& ex, const PlanNode& clause, const ContextPtr& outer,
                         const std::vector<VarId>& in_columns, std::size_t out_partitions);
OrderKernel order_kernel(const Executor& ex, const PlanNode& clause, const ContextPtr& outer,
                         const std::vector<VarId>& in_columns);

// Re-throws a QueryError with the node span attached when it has none.
template <class Fn>
auto with_span(const SourceSpan& span, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const QueryError& e) {
    if (e.span().known()) throw;
    throw e.with_span(span);
  }
}

}  // namespace jsoniq::detail
