#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jsoniq/atomic.hpp"
#include "jsoniq/errors.hpp"
#include "jsoniq/item.hpp"

namespace jsoniq {

using VarId = int;
inline constexpr VarId kNoVar = -1;

// Names of all variables of a bound query, indexed by VarId. Hidden
// variables introduced by the engine start with '#'.
class VarTable {
 public:
  VarId add(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<VarId>(names_.size() - 1);
  }
  const std::string& name(VarId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

enum class ExprKind {
  Literal,
  EmptySequence,
  VarRef,
  ContextItem,
  Comma,
  ObjectConstructor,  // children: key0, value0, key1, value1, ...
  ArrayConstructor,   // children: [content]
  Arithmetic,
  Negate,
  ValueComparison,
  GeneralComparison,
  And,
  Or,
  Not,
  StringConcat,
  Range,
  FunctionCall,
  DynamicCall,  // parsed but not supported by the planner
  TryCatch,     // children: body, handler per catch clause
  Cast,
  Castable,
  InstanceOf,
  Treat,
  Quantified,  // children: binding exprs..., satisfies
  If,          // children: condition, then, else
  Switch,      // children: operand, per case: values..., result; default
  Typeswitch,  // children: operand, case results..., default result
  Predicate,   // children: input, predicate
  ArrayAccess, // children: input, index
  ArrayUnbox,  // children: input
  ObjectLookup,  // children: input [, computed key]; name holds a literal key
  SimpleMap,   // children: input, mapping
  Flwor,       // clauses + children[0] = return expression
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ClauseKind { For, Let, Where, GroupBy, OrderBy, Count };

struct GroupSpec {
  std::string var;       // empty for an anonymous key expression
  VarId id = kNoVar;     // the grouping variable after the clause
  ExprPtr expr;          // null when grouping by an existing variable
  SourceSpan span;
};

struct OrderSpec {
  ExprPtr expr;
  bool descending = false;
  bool empty_greatest = false;
  std::string text;  // source text of the key, used in error messages
};

struct Clause {
  ClauseKind kind;
  SourceSpan span;
  std::string var;  // for/let/count
  VarId id = kNoVar;
  ExprPtr expr;     // for/let/where
  std::vector<GroupSpec> group_specs;
  std::vector<OrderSpec> order_specs;
  bool stable = false;
};

struct TypeswitchCase {
  std::vector<SequenceType> types;
  std::string var;
  VarId id = kNoVar;
};

struct Expr {
  ExprKind kind;
  SourceSpan span;
  std::vector<ExprPtr> children;

  Item literal;
  std::string name;  // variable, function or lookup key name
  VarId var = kNoVar;

  ArithOp arith_op = ArithOp::Add;
  CompareOp compare_op = CompareOp::Eq;
  AtomicType cast_type = AtomicType::String;
  bool allow_empty = false;  // "cast as T?"
  SequenceType sequence_type;

  bool every = false;                 // quantified
  std::vector<std::string> var_names; // quantified bindings
  std::vector<VarId> var_ids;

  std::vector<Clause> clauses;                   // flwor
  std::vector<TypeswitchCase> cases;             // typeswitch
  std::string default_var;                       // typeswitch default
  VarId default_id = kNoVar;
  std::vector<std::size_t> case_sizes;           // switch: values per case
  std::vector<std::vector<std::string>> catch_codes;  // try/catch

  Expr(ExprKind k, SourceSpan s) : kind(k), span(s) {}
};

struct Ast {
  std::string text;
  ExprPtr root;
};

// Compact structural rendering, e.g. Range(Literal(1), Literal(3)).
std::string to_sexpr(const Expr& expr);

}  // namespace jsoniq
