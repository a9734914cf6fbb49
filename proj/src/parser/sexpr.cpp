#include "jsoniq/ast.hpp"
#include "jsoniq/json.hpp"

namespace jsoniq {

namespace {

const char* const kArithNames[] = {"add", "sub", "mul", "div", "idiv", "mod"};

void render(std::string& out, const Expr& e);

void render_list(std::string& out, const std::vector<ExprPtr>& items,
                 std::size_t from = 0) {
  for (std::size_t i = from; i < items.size(); ++i) {
    if (i > from) out += ", ";
    render(out, *items[i]);
  }
}

void call(std::string& out, std::string_view name, const Expr& e) {
  out += name;
  out += '(';
  render_list(out, e.children);
  out += ')';
}

void render_clause(std::string& out, const Clause& c) {
  switch (c.kind) {
    case ClauseKind::For:
      out += "For(" + c.var + ", ";
      render(out, *c.expr);
      out += ')';
      break;
    case ClauseKind::Let:
      out += "Let(" + c.var + ", ";
      render(out, *c.expr);
      out += ')';
      break;
    case ClauseKind::Where:
      out += "Where(";
      render(out, *c.expr);
      out += ')';
      break;
    case ClauseKind::GroupBy:
      out += "GroupBy(";
      for (std::size_t i = 0; i < c.group_specs.size(); ++i) {
        if (i) out += ", ";
        const GroupSpec& g = c.group_specs[i];
        out += g.var.empty() ? "_" : g.var;
        if (g.expr) {
          out += " := ";
          render(out, *g.expr);
        }
      }
      out += ')';
      break;
    case ClauseKind::OrderBy:
      out += c.stable ? "StableOrderBy(" : "OrderBy(";
      for (std::size_t i = 0; i < c.order_specs.size(); ++i) {
        if (i) out += ", ";
        const OrderSpec& o = c.order_specs[i];
        render(out, *o.expr);
        out += o.descending ? " descending" : " ascending";
        if (o.empty_greatest) out += " empty greatest";
      }
      out += ')';
      break;
    case ClauseKind::Count:
      out += "Count(" + c.var + ")";
      break;
  }
}

void render(std::string& out, const Expr& e) {
  switch (e.kind) {
    case ExprKind::Literal:
      out += "Literal(" + to_json(e.literal) + ")";
      return;
    case ExprKind::EmptySequence:
      out += "Empty()";
      return;
    case ExprKind::VarRef:
      out += "Var(" + e.name + ")";
      return;
    case ExprKind::ContextItem:
      out += "ContextItem()";
      return;
    case ExprKind::Comma: call(out, "Comma", e); return;
    case ExprKind::ObjectConstructor: call(out, "Object", e); return;
    case ExprKind::ArrayConstructor: call(out, "Array", e); return;
    case ExprKind::Arithmetic:
      out += "Arith(";
      out += kArithNames[static_cast<int>(e.arith_op)];
      out += ", ";
      render_list(out, e.children);
      out += ')';
      return;
    case ExprKind::Negate: call(out, "Negate", e); return;
    case ExprKind::ValueComparison:
    case ExprKind::GeneralComparison:
      out += e.kind == ExprKind::ValueComparison ? "ValueCompare(" : "GeneralCompare(";
      out += compare_op_name(e.compare_op);
      out += ", ";
      render_list(out, e.children);
      out += ')';
      return;
    case ExprKind::And: call(out, "And", e); return;
    case ExprKind::Or: call(out, "Or", e); return;
    case ExprKind::Not: call(out, "Not", e); return;
    case ExprKind::StringConcat: call(out, "Concat", e); return;
    case ExprKind::Range: call(out, "Range", e); return;
    case ExprKind::FunctionCall:
      out += "Call(" + e.name;
      for (const auto& c : e.children) {
        out += ", ";
        render(out, *c);
      }
      out += ')';
      return;
    case ExprKind::DynamicCall: call(out, "DynamicCall", e); return;
    case ExprKind::TryCatch: call(out, "TryCatch", e); return;
    case ExprKind::Cast:
    case ExprKind::Castable:
      out += e.kind == ExprKind::Cast ? "Cast(" : "Castable(";
      render(out, *e.children[0]);
      out += ", ";
      out += atomic_type_name(e.cast_type);
      if (e.allow_empty) out += '?';
      out += ')';
      return;
    case ExprKind::InstanceOf:
    case ExprKind::Treat:
      out += e.kind == ExprKind::InstanceOf ? "InstanceOf(" : "Treat(";
      render(out, *e.children[0]);
      out += ", " + e.sequence_type.to_string() + ")";
      return;
    case ExprKind::Quantified:
      out += e.every ? "Every(" : "Some(";
      for (std::size_t i = 0; i < e.var_names.size(); ++i) {
        out += e.var_names[i] + " in ";
        render(out, *e.children[i]);
        out += ", ";
      }
      render(out, *e.children.back());
      out += ')';
      return;
    case ExprKind::If: call(out, "If", e); return;
    case ExprKind::Switch: call(out, "Switch", e); return;
    case ExprKind::Typeswitch: call(out, "Typeswitch", e); return;
    case ExprKind::Predicate: call(out, "Predicate", e); return;
    case ExprKind::ArrayAccess: call(out, "ArrayAccess", e); return;
    case ExprKind::ArrayUnbox: call(out, "Unbox", e); return;
    case ExprKind::ObjectLookup:
      out += "Lookup(";
      render(out, *e.children[0]);
      out += ", ";
      if (e.children.size() > 1) {
        render(out, *e.children[1]);
      } else {
        append_json_string(out, e.name);
      }
      out += ')';
      return;
    case ExprKind::SimpleMap: call(out, "SimpleMap", e); return;
    case ExprKind::Flwor:
      out += "Flwor(";
      for (const Clause& c : e.clauses) {
        render_clause(out, c);
        out += ", ";
      }
      out += "Return(";
      render(out, *e.children[0]);
      out += "))";
      return;
  }
}

}  // namespace

std::string to_sexpr(const Expr& expr) {
  std::string out;
  render(out, expr);
  return out;
}

}  // namespace jsoniq
