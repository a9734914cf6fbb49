#include "internal.hpp"
#include "jsoniq/atomic.hpp"

namespace jsoniq {

using namespace detail;

Executor::Executor(ExecOptions options, ExecStats& stats)
    : options_(options), stats_(&stats), pool_(options.workers) {
  if (options_.partitions == 0) options_.partitions = 1;
}

std::unique_ptr<LocalCursor> Executor::cursor(const PlanNode& node) const {
  if (node.mode >= ExecutionMode::PartitionedSequence) return make_materialize_cursor(*this, node);
  return make_expr_cursor(*this, node);
}

Sequence Executor::evaluate(const PlanNode& node, ContextPtr ctx) const {
  if (node.mode >= ExecutionMode::PartitionedSequence) {
    return collect(partitioned(node, std::move(ctx)), pool_);
  }
  auto c = make_expr_cursor(*this, node);
  return drain(*c, std::move(ctx));
}

namespace {

std::string path_argument(const Executor& ex, const PlanNode& node, const ContextPtr& ctx) {
  auto pattern = atomize_optional(ex.evaluate(*node.children[0], ctx), plan_kind_name(node));
  if (!pattern || !pattern->is_string()) {
    throw QueryError(ErrorCode::InvalidArgument, plan_kind_name(node) + " expects a path string");
  }
  return pattern->as_string();
}

std::size_t partitions_argument(const Executor& ex, const PlanNode& node, const ContextPtr& ctx) {
  if (node.children.size() < 2) return ex.options().partitions;
  return partition_count(ex.evaluate(*node.children[1], ctx));
}

Factory<MapFn> focus_closure(const Executor& ex, const PlanNode& body, ContextPtr ctx) {
  const Executor* exp = &ex;
  const PlanNode* node = &body;
  return [exp, node, ctx]() -> MapFn {
    std::shared_ptr<LocalCursor> c = exp->cursor(*node);
    return [c, ctx](const Item& item, const ItemSink& sink) {
      for (const Item& v : drain(*c, DynamicContext::with_focus(ctx, item))) sink(v);
    };
  };
}

}  // namespace

PartitionedSequence Executor::partitioned(const PlanNode& node, ContextPtr ctx) const {
  if (node.mode == ExecutionMode::Local) {
    const Executor* self = this;
    const PlanNode* n = &node;
    return single_partition([self, n, ctx](const ItemSink& sink) {
      auto c = self->cursor(*n);
      c->open(ctx);
      while (c->has_next()) sink(c->next());
      c->close();
    });
  }
  return with_span(node.span, [&]() -> PartitionedSequence {
    switch (node.kind) {
      case PlanKind::Builtin:
        switch (node.builtin) {
          case Builtin::JsonFile:
            return json_file(path_argument(*this, node, ctx), partitions_argument(*this, node, ctx),
                             source_options());
          case Builtin::TextFile:
            return text_file(path_argument(*this, node, ctx), partitions_argument(*this, node, ctx),
                             source_options());
          case Builtin::Parallelize: {
            std::size_t n = partitions_argument(*this, node, ctx);
            return partition_sequence(evaluate(*node.children[0], ctx), n);
          }
          case Builtin::Annotate: {
            Sequence schema = evaluate(*node.children[1], ctx);
            if (schema.size() != 1) {
              throw QueryError(ErrorCode::InvalidArgument, "annotate() expects one schema object");
            }
            return annotate(partitioned(*node.children[0], ctx), parse_schema(schema[0]), pool_);
          }
          default:
            break;
        }
        break;
      case PlanKind::Comma: {
        std::vector<PartitionedSequence> parts;
        for (const auto& c : node.children) parts.push_back(partitioned(*c, ctx));
        return concat_partitioned(std::move(parts));
      }
      case PlanKind::ObjectLookup: {
        std::string key = node.children.size() > 1
                              ? lookup_key(evaluate(*node.children[1], ctx))
                              : node.name;
        return flat_map_items(partitioned(*node.children[0], ctx), [key]() -> MapFn {
          return [key](const Item& item, const ItemSink& sink) { lookup_step(item, key, sink); };
        });
      }
      case PlanKind::ArrayUnbox:
        return flat_map_items(partitioned(*node.children[0], ctx), []() -> MapFn {
          return [](const Item& item, const ItemSink& sink) { unbox_step(item, sink); };
        });
      case PlanKind::ArrayAccess: {
        auto index = access_index(evaluate(*node.children[1], ctx));
        return flat_map_items(partitioned(*node.children[0], ctx), [index]() -> MapFn {
          return [index](const Item& item, const ItemSink& sink) { access_step(item, index, sink); };
        });
      }
      case PlanKind::Predicate: {
        const Executor* self = this;
        const PlanNode* pred = node.children[1].get();
        SourceSpan span = node.span;
        return flat_map_positional(
            partitioned(*node.children[0], ctx),
            [self, pred, ctx, span]() -> PositionalMapFn {
              std::shared_ptr<LocalCursor> c = self->cursor(*pred);
              return [c, ctx, span](const Item& item, std::uint64_t pos, const ItemSink& sink) {
                Sequence r = drain(*c, DynamicContext::with_focus(ctx, item));
                if (with_span(span, [&] { return predicate_keeps(r, pos); })) sink(item);
              };
            },
            pool_);
      }
      case PlanKind::SimpleMap:
        return flat_map_items(partitioned(*node.children[0], ctx),
                              focus_closure(*this, *node.children[1], ctx));
      case PlanKind::If:
      case PlanKind::Switch:
      case PlanKind::Typeswitch: {
        Branch b = choose_branch(node, ctx, [&](std::size_t i, const ContextPtr& c) {
          return evaluate(*node.children[i], c);
        });
        return partitioned(*node.children[b.child], b.ctx);
      }
      case PlanKind::ReturnClause: {
        TupleFrame in = frame(*node.input, ctx);
        auto body = tuple_closure(*this, *node.children[0], ctx, node.input->columns);
        return return_items(std::move(in), [body]() -> TupleEmitFn {
          TupleFn fn = body();
          return [fn](const Tuple& t, const ItemSink& sink) {
            for (const Item& v : fn(t)) sink(v);
          };
        });
      }
      default:
        break;
    }
    throw QueryError(ErrorCode::UnsupportedFeature,
                     "no partitioned implementation for " + plan_kind_name(node));
  });
}

TupleFrame Executor::frame(const PlanNode& clause, ContextPtr ctx) const {
  static const std::vector<VarId> kNone;
  const std::vector<VarId>& in_columns = clause.input ? clause.input->columns : kNone;
  return with_span(clause.span, [&]() -> TupleFrame {
    switch (clause.kind) {
      case PlanKind::ForClause: {
        if (clause.lifts) {
          Tuple prefix;
          ContextPtr bound = ctx;
          if (clause.input) {
            auto c = make_tuple_cursor(*this, *clause.input);
            c->open(ctx);
            c->next(prefix);
            bound = bind_tuple(ctx, in_columns, prefix);
          }
          Tuple kept;
          for (std::size_t i : clause.carry) kept.push_back(prefix[i]);
          return for_frame(partitioned(*clause.children[0], bound), kept, clause.columns);
        }
        TupleFrame in = frame(*clause.input, ctx);
        if (clause.independent) {
          return for_broadcast(std::move(in), clause.columns, clause.carry,
                               evaluate(*clause.children[0], ctx));
        }
        return for_tuples(std::move(in), clause.columns, clause.carry,
                          tuple_closure(*this, *clause.children[0], ctx, in_columns));
      }
      case PlanKind::LetClause:
        return let_tuples(frame(*clause.input, ctx), clause.columns, clause.carry,
                          tuple_closure(*this, *clause.children[0], ctx, in_columns));
      case PlanKind::WhereClause: {
        auto body = tuple_closure(*this, *clause.children[0], ctx, in_columns);
        SourceSpan span = clause.span;
        return where_tuples(frame(*clause.input, ctx), [body, span]() -> TuplePredicate {
          TupleFn fn = body();
          return [fn, span](const Tuple& t) {
            Sequence r = fn(t);
            return with_span(span, [&] { return effective_boolean_value(r); });
          };
        });
      }
      case PlanKind::CountClause:
        return count_tuples(frame(*clause.input, ctx), clause.columns, clause.carry, pool_);
      case PlanKind::GroupByClause:
        return group_tuples(frame(*clause.input, ctx),
                            group_kernel(*this, clause, ctx, in_columns, options_.partitions),
                            pool_);
      case PlanKind::OrderByClause:
        return order_tuples(frame(*clause.input, ctx),
                            order_kernel(*this, clause, ctx, in_columns), pool_);
      default:
        break;
    }
    throw QueryError(ErrorCode::UnsupportedFeature,
                     "no tuple-frame implementation for " + plan_kind_name(clause));
  });
}

}  // namespace jsoniq
