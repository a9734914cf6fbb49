#include <algorithm>

#include "internal.hpp"
#include "jsoniq/atomic.hpp"

namespace jsoniq::detail {

namespace {

using CursorPtr = std::unique_ptr<LocalCursor>;

const std::vector<VarId>& input_columns(const PlanNode& clause) {
  static const std::vector<VarId> none;
  return clause.input ? clause.input->columns : none;
}

Tuple pick(const Tuple& t, const std::vector<std::size_t>& carry) {
  Tuple out;
  out.reserve(carry.size() + 1);
  for (std::size_t i : carry) out.push_back(t[i]);
  return out;
}

// The single empty tuple that starts every pipeline.
class StartCursor : public TupleCursor {
 public:
  void open(const ContextPtr&) override { done_ = false; }
  bool next(Tuple& out) override {
    if (done_) return false;
    out.clear();
    done_ = true;
    return true;
  }

 private:
  bool done_ = true;
};

class ClauseCursor : public TupleCursor {
 public:
  ClauseCursor(const Executor& ex, const PlanNode& clause)
      : ex_(ex), clause_(clause), in_columns_(input_columns(clause)) {
    input_ = clause.input ? make_tuple_cursor(ex, *clause.input) : std::make_unique<StartCursor>();
    for (const auto& c : clause.children) children_.push_back(ex.cursor(*c));
  }

  void open(const ContextPtr& outer) override {
    outer_ = outer;
    input_->open(outer);
    on_open();
  }

 protected:
  virtual void on_open() {}
  ContextPtr bind(const Tuple& t) const { return bind_tuple(outer_, in_columns_, t); }

  const Executor& ex_;
  const PlanNode& clause_;
  const std::vector<VarId>& in_columns_;
  ContextPtr outer_;
  std::unique_ptr<TupleCursor> input_;
  std::vector<CursorPtr> children_;
};

class ForCursor : public ClauseCursor {
 public:
  using ClauseCursor::ClauseCursor;

  bool next(Tuple& out) override {
    for (;;) {
      if (active_) {
        if (clause_.independent) {
          if (index_ < cached_.size()) {
            out = pick(current_, clause_.carry);
            out.emplace_back(cached_[index_++]);
            return true;
          }
        } else if (children_[0]->has_next()) {
          out = pick(current_, clause_.carry);
          out.emplace_back(children_[0]->next());
          return true;
        } else {
          children_[0]->close();
        }
        active_ = false;
      }
      if (!input_->next(current_)) return false;
      active_ = true;
      index_ = 0;
      if (!clause_.independent) children_[0]->open(bind(current_));
    }
  }

 protected:
  void on_open() override {
    active_ = false;
    children_[0]->close();
    if (clause_.independent) cached_ = drain(*children_[0], outer_);
  }

 private:
  Tuple current_;
  bool active_ = false;
  Sequence cached_;
  std::size_t index_ = 0;
};

class LetCursor : public ClauseCursor {
 public:
  using ClauseCursor::ClauseCursor;

  bool next(Tuple& out) override {
    Tuple t;
    if (!input_->next(t)) return false;
    Sequence value = drain(*children_[0], bind(t));
    out = pick(t, clause_.carry);
    out.push_back(std::move(value));
    return true;
  }
};

class WhereCursor : public ClauseCursor {
 public:
  using ClauseCursor::ClauseCursor;

  bool next(Tuple& out) override {
    while (input_->next(out)) {
      if (with_span(clause_.span, [&] {
            return effective_boolean_value(drain(*children_[0], bind(out)));
          })) {
        return true;
      }
    }
    return false;
  }
};

class CountCursor : public ClauseCursor {
 public:
  using ClauseCursor::ClauseCursor;

  bool next(Tuple& out) override {
    Tuple t;
    if (!input_->next(t)) return false;
    out = pick(t, clause_.carry);
    out.emplace_back(Item::integer(++counter_));
    return true;
  }

 protected:
  void on_open() override { counter_ = 0; }

 private:
  std::int64_t counter_ = 0;
};

// Materializes the input and runs a frame kernel on a single partition.
class KernelCursor : public ClauseCursor {
 public:
  using ClauseCursor::ClauseCursor;

  bool next(Tuple& out) override {
    if (index_ >= rows_.size()) return false;
    out = std::move(rows_[index_++]);
    return true;
  }

 protected:
  void on_open() override {
    auto rows = std::make_shared<std::vector<Tuple>>();
    Tuple t;
    while (input_->next(t)) rows->push_back(std::move(t));
    TupleFrame in;
    in.columns = in_columns_;
    in.partitions.push_back([rows](const TupleSink& sink) {
      for (const Tuple& r : *rows) sink(Tuple(r));
    });
    WorkerPool serial(1);
    TupleFrame out = with_span(clause_.span, [&] {
      if (clause_.kind == PlanKind::GroupByClause) {
        return group_tuples(in, group_kernel(ex_, clause_, outer_, in_columns_, 1), serial);
      }
      return order_tuples(in, order_kernel(ex_, clause_, outer_, in_columns_), serial);
    });
    auto parts = materialize(out, serial);
    rows_.clear();
    for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(rows_));
    index_ = 0;
  }

 private:
  std::vector<Tuple> rows_;
  std::size_t index_ = 0;
};

class ReturnCursor : public LocalCursor {
 public:
  ReturnCursor(const Executor& ex, const PlanNode& ret)
      : LocalCursor(ret.span), in_columns_(input_columns(ret)) {
    input_ = make_tuple_cursor(ex, *ret.input);
    body_ = ex.cursor(*ret.children[0]);
  }

 protected:
  void on_open() override { input_->open(context()); }
  std::optional<Item> fetch() override {
    for (;;) {
      if (body_->is_open()) {
        if (body_->has_next()) return body_->next();
        body_->close();
      }
      if (!input_->next(tuple_)) return std::nullopt;
      body_->open(bind_tuple(context(), in_columns_, tuple_));
    }
  }
  void on_close() override { body_->close(); }

 private:
  const std::vector<VarId>& in_columns_;
  std::unique_ptr<TupleCursor> input_;
  CursorPtr body_;
  Tuple tuple_;
};

}  // namespace

std::unique_ptr<TupleCursor> make_tuple_cursor(const Executor& ex, const PlanNode& clause) {
  switch (clause.kind) {
    case PlanKind::ForClause: return std::make_unique<ForCursor>(ex, clause);
    case PlanKind::LetClause: return std::make_unique<LetCursor>(ex, clause);
    case PlanKind::WhereClause: return std::make_unique<WhereCursor>(ex, clause);
    case PlanKind::CountClause: return std::make_unique<CountCursor>(ex, clause);
    case PlanKind::GroupByClause:
    case PlanKind::OrderByClause:
      return std::make_unique<KernelCursor>(ex, clause);
    default:
      break;
  }
  throw QueryError(ErrorCode::UnsupportedFeature, "not a clause: " + plan_kind_name(clause));
}

std::unique_ptr<LocalCursor> make_return_cursor(const Executor& ex, const PlanNode& ret) {
  return std::make_unique<ReturnCursor>(ex, ret);
}

Factory<TupleFn> tuple_closure(const Executor& ex, const PlanNode& expr, ContextPtr outer,
                               std::vector<VarId> columns) {
  const Executor* exp = &ex;
  const PlanNode* node = &expr;
  return [exp, node, outer, columns]() -> TupleFn {
    std::shared_ptr<LocalCursor> cursor = exp->cursor(*node);
    return [cursor, outer, columns](const Tuple& t) {
      return drain(*cursor, bind_tuple(outer, columns, t));
    };
  };
}

Factory<KeyFn> key_closure(const Executor& ex, const PlanNode& clause, ContextPtr outer,
                           std::vector<VarId> columns) {
  const Executor* exp = &ex;
  const PlanNode* node = &clause;
  return [exp, node, outer, columns]() -> KeyFn {
    auto cursors = std::make_shared<std::vector<CursorPtr>>();
    for (const auto& c : node->children) cursors->push_back(exp->cursor(*c));
    return [cursors, outer, columns](const Tuple& t, std::vector<Sequence>& keys) {
      ContextPtr ctx = bind_tuple(outer, columns, t);
      for (auto& c : *cursors) keys.push_back(drain(*c, ctx));
    };
  };
}

GroupKernel group_kernel(const Executor& ex, const PlanNode& clause, const ContextPtr& outer,
                         const std::vector<VarId>& in_columns, std::size_t out_partitions) {
  GroupKernel k;
  k.make_keys = key_closure(ex, clause, outer, in_columns);
  k.carry = clause.carry;
  for (const AggregateSpec& a : clause.aggregates) {
    auto it = std::find(in_columns.begin(), in_columns.end(), a.source);
    k.aggregates.push_back({static_cast<std::size_t>(it - in_columns.begin()), a.kind});
  }
  k.null_order = ex.options().null_order;
  k.columns = clause.columns;
  k.out_partitions = out_partitions;
  return k;
}

OrderKernel order_kernel(const Executor& ex, const PlanNode& clause, const ContextPtr& outer,
                         const std::vector<VarId>& in_columns) {
  OrderKernel k;
  k.make_keys = key_closure(ex, clause, outer, in_columns);
  k.keys = clause.order_keys;
  k.null_order = ex.options().null_order;
  return k;
}

}  // namespace jsoniq::detail
