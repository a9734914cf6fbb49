#pragma once

#include <memory>
#include <optional>

#include "jsoniq/context.hpp"
#include "jsoniq/io.hpp"
#include "jsoniq/parallel.hpp"
#include "jsoniq/plan.hpp"
#include "jsoniq/shred.hpp"
#include "jsoniq/stats.hpp"

namespace jsoniq {

struct ExecOptions {
  int workers = 1;
  std::size_t partitions = 2;
  NullOrder null_order = NullOrder::Before;
  BadLinePolicy bad_lines = BadLinePolicy::Fail;
};

// Volcano iterator. open() binds a context, reset() rewinds under a new
// context without reallocating, close() releases resources. Calling next()
// past the end or using a closed cursor raises CursorProtocol.
class LocalCursor {
 public:
  explicit LocalCursor(SourceSpan span) : span_(span) {}
  virtual ~LocalCursor() = default;

  void open(ContextPtr ctx);
  bool has_next();
  Item next();
  void reset(ContextPtr ctx);
  void close();
  bool is_open() const { return open_; }

 protected:
  virtual void on_open() = 0;
  virtual std::optional<Item> fetch() = 0;
  virtual void on_close() {}
  const ContextPtr& context() const { return ctx_; }

 private:
  void pull();

  SourceSpan span_;
  ContextPtr ctx_;
  bool open_ = false;
  bool pulled_ = false;
  std::optional<Item> lookahead_;
};

// Opens (or resets) the cursor under ctx and collects every item.
Sequence drain(LocalCursor& cursor, ContextPtr ctx);

class Executor {
 public:
  Executor(ExecOptions options, ExecStats& stats);

  const ExecOptions& options() const { return options_; }
  ExecStats& stats() const { return *stats_; }
  const WorkerPool& pool() const { return pool_; }
  SourceOptions source_options() const { return {options_.bad_lines, stats_}; }

  // Local interface of any expression node; partitioned nodes are collected.
  std::unique_ptr<LocalCursor> cursor(const PlanNode& node) const;
  // Evaluates through the node's highest interface.
  Sequence evaluate(const PlanNode& node, ContextPtr ctx) const;
  // Partitioned interface; a Local node becomes a single partition.
  PartitionedSequence partitioned(const PlanNode& node, ContextPtr ctx) const;
  // Tuple stream of a clause running in TupleFrame mode.
  TupleFrame frame(const PlanNode& clause, ContextPtr ctx) const;

 private:
  ExecOptions options_;
  ExecStats* stats_;
  WorkerPool pool_;
};

}  // namespace jsoniq
