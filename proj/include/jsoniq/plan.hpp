#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jsoniq/ast.hpp"
#include "jsoniq/atomic.hpp"
#include "jsoniq/item.hpp"

namespace jsoniq {

// Ordered: Local < PartitionedSequence < TupleFrame.
enum class ExecutionMode : std::uint8_t { Local, PartitionedSequence, TupleFrame };

std::string_view execution_mode_name(ExecutionMode mode);

enum class PlanKind : std::uint8_t {
  Literal,
  EmptySequence,
  VarRef,
  ContextItem,
  Comma,
  ObjectConstructor,
  ArrayConstructor,
  Arithmetic,
  Negate,
  ValueComparison,
  GeneralComparison,
  And,
  Or,
  Not,
  StringConcat,
  Range,
  Builtin,
  TryCatch,
  Cast,
  Castable,
  InstanceOf,
  Treat,
  Quantified,
  If,
  Switch,
  Typeswitch,
  Predicate,
  ArrayAccess,
  ArrayUnbox,
  ObjectLookup,
  SimpleMap,
  ForClause,
  LetClause,
  WhereClause,
  GroupByClause,
  OrderByClause,
  CountClause,
  ReturnClause,
  AggregateRef,  // reads a group-by aggregate column (pushdown rewrite)
};

enum class Builtin : std::uint8_t {
  Count,
  Sum,
  Avg,
  Min,
  Max,
  String,
  Concat,
  Substring,
  StringLength,
  Contains,
  StartsWith,
  LowerCase,
  UpperCase,
  Size,
  Keys,
  Values,
  Boolean,
  Not,
  Abs,
  Round,
  JsonFile,
  TextFile,
  Parallelize,
  Annotate,
  Exists,
  Empty,
};

struct BuiltinInfo {
  Builtin id;
  std::string_view name;
  int min_args;
  int max_args;  // -1 for variadic
};

const BuiltinInfo* find_builtin(std::string_view name);
const BuiltinInfo& builtin_info(Builtin id);

enum class AggregateKind : std::uint8_t { Count, Sum, Avg, Min, Max };

std::string_view aggregate_name(AggregateKind kind);

struct AggregateSpec {
  VarId source = kNoVar;  // non-grouping column being aggregated
  AggregateKind kind = AggregateKind::Count;
  VarId value = kNoVar;   // output column holding the aggregate
  VarId error = kNoVar;   // output column holding a deferred error, if any
};

struct OrderKey {
  bool descending = false;
  bool empty_greatest = false;
  std::string text;
};

struct PlanNode;
using PlanPtr = std::unique_ptr<PlanNode>;

struct PlanNode {
  PlanKind kind;
  ExecutionMode mode = ExecutionMode::Local;
  SourceSpan span;
  std::vector<PlanPtr> children;
  PlanPtr input;  // preceding clause of a FLWOR pipeline

  Item literal;
  std::string name;
  Builtin builtin = Builtin::Count;
  VarId var = kNoVar;

  ArithOp arith_op = ArithOp::Add;
  CompareOp compare_op = CompareOp::Eq;
  AtomicType cast_type = AtomicType::String;
  bool allow_empty = false;
  SequenceType sequence_type;

  bool every = false;
  std::vector<VarId> vars;  // quantified bindings, typeswitch case variables
  std::vector<std::vector<SequenceType>> case_types;
  std::vector<std::size_t> case_sizes;
  std::vector<std::vector<std::string>> catch_codes;

  // Clause layout: `columns` is the tuple layout after the clause; `carry`
  // lists the input column indices copied, in order, before any new columns.
  std::vector<VarId> columns;
  std::vector<std::size_t> carry;
  std::vector<VarId> group_vars;  // group by: one per key (keys are children)
  std::vector<AggregateSpec> aggregates;
  std::vector<VarId> dropped;
  std::vector<OrderKey> order_keys;
  bool stable = false;
  bool independent = false;  // for clause whose binding ignores tuple columns
  bool lifts = false;        // for clause that starts a tuple frame
  VarId error_var = kNoVar;  // AggregateRef

  PlanNode(PlanKind k, SourceSpan s) : kind(k), span(s) {}

  bool is_clause() const {
    return kind >= PlanKind::ForClause && kind <= PlanKind::ReturnClause;
  }
};

struct Plan {
  PlanPtr root;
  VarTable vars;  // includes hidden columns added by rewrites
};

// Builds the iterator tree. Throws UnsupportedFeature for unknown functions,
// wrong arity and dynamic function calls.
Plan translate(const Ast& ast, const VarTable& vars);

// Bottom-up mode assignment. With force_local every node is Local.
void assign_modes(Plan& plan, bool force_local);

// Replaces count/sum/avg/min/max over non-grouping variables by aggregate
// columns computed inside the group-by and drops unreferenced columns.
void rewrite_aggregate_pushdown(Plan& plan);

// Indented rendering: one node per line with kind, mode and variables.
std::string render_plan(const Plan& plan);

// Compact data-flow shape without closures, e.g.
// CountFn(ReturnClause(ForClause(JsonFileFn(Literal)))).
std::string plan_shape(const PlanNode& node);

std::string plan_kind_name(const PlanNode& node);

// Children evaluated once per item or tuple rather than once per evaluation
// of the node.
bool is_closure_child(const PlanNode& node, std::size_t child);

}  // namespace jsoniq
