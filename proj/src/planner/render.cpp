#include <cctype>

#include "jsoniq/json.hpp"
#include "jsoniq/plan.hpp"

namespace jsoniq {

namespace {

const char* const kKindNames[] = {
    "Literal",          "EmptySequence",    "VarRef",          "ContextItem",
    "Comma",            "ObjectConstructor", "ArrayConstructor", "Arithmetic",
    "Negate",           "ValueComparison",  "GeneralComparison", "And",
    "Or",               "Not",              "StringConcat",     "Range",
    "Builtin",          "TryCatch",         "Cast",             "Castable",
    "InstanceOf",       "Treat",            "Quantified",       "If",
    "Switch",           "Typeswitch",       "Predicate",        "ArrayAccess",
    "ArrayUnbox",       "ObjectLookup",     "SimpleMap",        "ForClause",
    "LetClause",        "WhereClause",      "GroupByClause",    "OrderByClause",
    "CountClause",      "ReturnClause",     "AggregateRef",
};

std::string var_label(const VarTable& vars, VarId id) {
  if (id == kNoVar || static_cast<std::size_t>(id) >= vars.size()) return "$?";
  return "$" + vars.name(id);
}

std::string details(const PlanNode& n, const VarTable& vars) {
  std::string out;
  auto list = [&](const char* label, const std::vector<VarId>& ids) {
    if (ids.empty()) return;
    out += " ";
    out += label;
    out += "=";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += ",";
      out += var_label(vars, ids[i]);
    }
  };
  switch (n.kind) {
    case PlanKind::Literal:
      out += " " + to_json(n.literal);
      break;
    case PlanKind::VarRef:
    case PlanKind::AggregateRef:
      out += " " + var_label(vars, n.var);
      break;
    case PlanKind::ObjectLookup:
      if (n.children.size() == 1) out += " key=" + n.name;
      break;
    case PlanKind::Arithmetic:
      out += " ";
      out += arith_op_name(n.arith_op);
      break;
    case PlanKind::ValueComparison:
    case PlanKind::GeneralComparison:
      out += " ";
      out += compare_op_name(n.compare_op);
      break;
    case PlanKind::ForClause:
    case PlanKind::LetClause:
    case PlanKind::CountClause:
      out += " " + var_label(vars, n.var);
      if (n.lifts) out += " lifts";
      if (n.independent) out += " independent";
      break;
    case PlanKind::GroupByClause:
      list("keys", n.group_vars);
      list("dropped", n.dropped);
      for (const AggregateSpec& a : n.aggregates) {
        out += " ";
        out += aggregate_name(a.kind);
        out += "(" + var_label(vars, a.source) + ")->" + var_label(vars, a.value);
      }
      break;
    case PlanKind::OrderByClause:
      if (n.stable) out += " stable";
      break;
    default:
      break;
  }
  if (n.is_clause()) list("columns", n.columns);
  return out;
}

void render(std::string& out, const PlanNode& n, const VarTable& vars, int depth,
            bool closure) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += plan_kind_name(n);
  out += " [";
  out += execution_mode_name(n.mode);
  out += "]";
  if (closure) out += " closure";
  out += details(n, vars);
  out += '\n';
  if (n.input) render(out, *n.input, vars, depth + 1, false);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    render(out, *n.children[i], vars, depth + 1, is_closure_child(n, i));
  }
}

}  // namespace

std::string plan_kind_name(const PlanNode& node) {
  if (node.kind != PlanKind::Builtin) return kKindNames[static_cast<int>(node.kind)];
  std::string out;
  bool upper = true;
  for (char c : builtin_info(node.builtin).name) {
    if (c == '-') {
      upper = true;
      continue;
    }
    out += upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    upper = false;
  }
  return out + "Fn";
}

std::string render_plan(const Plan& plan) {
  std::string out;
  render(out, *plan.root, plan.vars, 0, false);
  return out;
}

std::string plan_shape(const PlanNode& node) {
  std::vector<std::string> parts;
  if (node.input) parts.push_back(plan_shape(*node.input));
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (!is_closure_child(node, i)) parts.push_back(plan_shape(*node.children[i]));
  }
  std::string out = plan_kind_name(node);
  if (parts.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out + ')';
}

}  // namespace jsoniq
