#include <algorithm>
#include <array>
#include <set>

#include "jsoniq/plan.hpp"
#include "layout.hpp"

namespace jsoniq {

namespace {

constexpr std::array<BuiltinInfo, 26> kBuiltins = {{
    {Builtin::Count, "count", 1, 1},
    {Builtin::Sum, "sum", 1, 1},
    {Builtin::Avg, "avg", 1, 1},
    {Builtin::Min, "min", 1, 1},
    {Builtin::Max, "max", 1, 1},
    {Builtin::String, "string", 1, 1},
    {Builtin::Concat, "concat", 2, -1},
    {Builtin::Substring, "substring", 2, 3},
    {Builtin::StringLength, "string-length", 1, 1},
    {Builtin::Contains, "contains", 2, 2},
    {Builtin::StartsWith, "starts-with", 2, 2},
    {Builtin::LowerCase, "lower-case", 1, 1},
    {Builtin::UpperCase, "upper-case", 1, 1},
    {Builtin::Size, "size", 1, 1},
    {Builtin::Keys, "keys", 1, 1},
    {Builtin::Values, "values", 1, 1},
    {Builtin::Boolean, "boolean", 1, 1},
    {Builtin::Not, "not", 1, 1},
    {Builtin::Abs, "abs", 1, 1},
    {Builtin::Round, "round", 1, 1},
    {Builtin::JsonFile, "json-file", 1, 2},
    {Builtin::TextFile, "text-file", 1, 2},
    {Builtin::Parallelize, "parallelize", 1, 2},
    {Builtin::Annotate, "annotate", 2, 2},
    {Builtin::Exists, "exists", 1, 1},
    {Builtin::Empty, "empty", 1, 1},
}};

PlanKind plan_kind(ExprKind kind) {
  switch (kind) {
    case ExprKind::Literal: return PlanKind::Literal;
    case ExprKind::EmptySequence: return PlanKind::EmptySequence;
    case ExprKind::VarRef: return PlanKind::VarRef;
    case ExprKind::ContextItem: return PlanKind::ContextItem;
    case ExprKind::Comma: return PlanKind::Comma;
    case ExprKind::ObjectConstructor: return PlanKind::ObjectConstructor;
    case ExprKind::ArrayConstructor: return PlanKind::ArrayConstructor;
    case ExprKind::Arithmetic: return PlanKind::Arithmetic;
    case ExprKind::Negate: return PlanKind::Negate;
    case ExprKind::ValueComparison: return PlanKind::ValueComparison;
    case ExprKind::GeneralComparison: return PlanKind::GeneralComparison;
    case ExprKind::And: return PlanKind::And;
    case ExprKind::Or: return PlanKind::Or;
    case ExprKind::Not: return PlanKind::Not;
    case ExprKind::StringConcat: return PlanKind::StringConcat;
    case ExprKind::Range: return PlanKind::Range;
    case ExprKind::FunctionCall: return PlanKind::Builtin;
    case ExprKind::TryCatch: return PlanKind::TryCatch;
    case ExprKind::Cast: return PlanKind::Cast;
    case ExprKind::Castable: return PlanKind::Castable;
    case ExprKind::InstanceOf: return PlanKind::InstanceOf;
    case ExprKind::Treat: return PlanKind::Treat;
    case ExprKind::Quantified: return PlanKind::Quantified;
    case ExprKind::If: return PlanKind::If;
    case ExprKind::Switch: return PlanKind::Switch;
    case ExprKind::Typeswitch: return PlanKind::Typeswitch;
    case ExprKind::Predicate: return PlanKind::Predicate;
    case ExprKind::ArrayAccess: return PlanKind::ArrayAccess;
    case ExprKind::ArrayUnbox: return PlanKind::ArrayUnbox;
    case ExprKind::ObjectLookup: return PlanKind::ObjectLookup;
    case ExprKind::SimpleMap: return PlanKind::SimpleMap;
    case ExprKind::Flwor:
    case ExprKind::DynamicCall:
      break;
  }
  return PlanKind::EmptySequence;
}

void collect_refs(const PlanNode& node, std::set<VarId>& out) {
  if (node.kind == PlanKind::VarRef) out.insert(node.var);
  if (node.kind == PlanKind::AggregateRef) {
    out.insert(node.var);
    out.insert(node.error_var);
  }
  for (const auto& c : node.children) collect_refs(*c, out);
  if (node.input) collect_refs(*node.input, out);
}

class Translator {
 public:
  explicit Translator(const VarTable& vars) : vars_(vars) {}

  PlanPtr expr(const Expr& e) {
    if (e.kind == ExprKind::Flwor) return flwor(e);
    if (e.kind == ExprKind::DynamicCall) {
      throw QueryError(ErrorCode::UnsupportedFeature,
                       "dynamic function calls are not supported", e.span);
    }
    auto n = std::make_unique<PlanNode>(plan_kind(e.kind), e.span);
    n->literal = e.literal;
    n->name = e.name;
    n->var = e.var;
    n->arith_op = e.arith_op;
    n->compare_op = e.compare_op;
    n->cast_type = e.cast_type;
    n->allow_empty = e.allow_empty;
    n->sequence_type = e.sequence_type;
    n->every = e.every;
    n->vars = e.var_ids;
    n->case_sizes = e.case_sizes;
    n->catch_codes = e.catch_codes;
    if (e.kind == ExprKind::Typeswitch) {
      for (const auto& c : e.cases) {
        n->case_types.push_back(c.types);
        n->vars.push_back(c.id);
      }
      n->vars.push_back(e.default_id);
    }
    if (e.kind == ExprKind::FunctionCall) {
      const BuiltinInfo* info = find_builtin(e.name);
      if (!info) {
        throw QueryError(ErrorCode::UnsupportedFeature,
                         "unknown function " + e.name + "()", e.span);
      }
      int argc = static_cast<int>(e.children.size());
      if (argc < info->min_args || (info->max_args >= 0 && argc > info->max_args)) {
        throw QueryError(ErrorCode::UnsupportedFeature,
                         "function " + e.name + "() does not accept " +
                             std::to_string(argc) + " argument(s)",
                         e.span);
      }
      n->builtin = info->id;
    }
    for (const auto& c : e.children) n->children.push_back(expr(*c));
    return n;
  }

 private:
  PlanPtr flwor(const Expr& e) {
    PlanPtr prev;
    std::vector<VarId> columns;
    for (const Clause& c : e.clauses) {
      PlanPtr n;
      switch (c.kind) {
        case ClauseKind::For: {
          n = std::make_unique<PlanNode>(PlanKind::ForClause, c.span);
          n->var = c.id;
          n->children.push_back(expr(*c.expr));
          if (prev) {
            std::set<VarId> refs;
            collect_refs(*n->children[0], refs);
            n->independent = std::none_of(columns.begin(), columns.end(),
                                          [&](VarId v) { return refs.count(v) > 0; });
          }
          break;
        }
        case ClauseKind::Let:
          n = std::make_unique<PlanNode>(PlanKind::LetClause, c.span);
          n->var = c.id;
          n->children.push_back(expr(*c.expr));
          break;
        case ClauseKind::Where:
          n = std::make_unique<PlanNode>(PlanKind::WhereClause, c.span);
          n->children.push_back(expr(*c.expr));
          break;
        case ClauseKind::GroupBy: {
          n = std::make_unique<PlanNode>(PlanKind::GroupByClause, c.span);
          for (const GroupSpec& g : c.group_specs) {
            n->children.push_back(expr(*g.expr));
            n->group_vars.push_back(g.id);
          }
          break;
        }
        case ClauseKind::OrderBy:
          n = std::make_unique<PlanNode>(PlanKind::OrderByClause, c.span);
          n->stable = c.stable;
          for (const OrderSpec& o : c.order_specs) {
            n->children.push_back(expr(*o.expr));
            n->order_keys.push_back({o.descending, o.empty_greatest, o.text});
          }
          break;
        case ClauseKind::Count:
          n = std::make_unique<PlanNode>(PlanKind::CountClause, c.span);
          n->var = c.id;
          break;
      }
      detail::layout_clause(*n, columns, vars_);
      n->input = std::move(prev);
      columns = n->columns;
      prev = std::move(n);
    }
    auto ret = std::make_unique<PlanNode>(PlanKind::ReturnClause, e.span);
    ret->children.push_back(expr(*e.children[0]));
    detail::layout_clause(*ret, columns, vars_);
    ret->input = std::move(prev);
    return ret;
  }

  const VarTable& vars_;
};

}  // namespace

const BuiltinInfo* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const BuiltinInfo& builtin_info(Builtin id) {
  return kBuiltins[static_cast<std::size_t>(id)];
}

std::string_view aggregate_name(AggregateKind kind) {
  switch (kind) {
    case AggregateKind::Count: return "count";
    case AggregateKind::Sum: return "sum";
    case AggregateKind::Avg: return "avg";
    case AggregateKind::Min: return "min";
    case AggregateKind::Max: return "max";
  }
  return "?";
}

std::string_view execution_mode_name(ExecutionMode mode) {
  switch (mode) {
    case ExecutionMode::Local: return "Local";
    case ExecutionMode::PartitionedSequence: return "PartitionedSequence";
    case ExecutionMode::TupleFrame: return "TupleFrame";
  }
  return "?";
}

Plan translate(const Ast& ast, const VarTable& vars) {
  Plan plan;
  plan.vars = vars;
  Translator t(plan.vars);
  plan.root = t.expr(*ast.root);
  return plan;
}

bool is_closure_child(const PlanNode& node, std::size_t child) {
  switch (node.kind) {
    case PlanKind::Predicate:
    case PlanKind::SimpleMap:
      return child == 1;
    case PlanKind::Quantified:
      return child > 0;
    case PlanKind::ForClause:
    case PlanKind::LetClause:
      return node.input != nullptr;
    case PlanKind::WhereClause:
    case PlanKind::GroupByClause:
    case PlanKind::OrderByClause:
    case PlanKind::ReturnClause:
      return true;
    default:
      return false;
  }
}

}  // namespace jsoniq
