#include "layout.hpp"

#include <algorithm>
#include <set>

namespace jsoniq::detail {

void layout_clause(PlanNode& n, const std::vector<VarId>& in, const VarTable& vars) {
  n.columns.clear();
  n.carry.clear();
  std::set<std::string> shadowed;
  switch (n.kind) {
    case PlanKind::ForClause:
    case PlanKind::LetClause:
    case PlanKind::CountClause:
      shadowed.insert(vars.name(n.var));
      break;
    case PlanKind::GroupByClause:
      for (VarId g : n.group_vars) shadowed.insert(vars.name(g));
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (shadowed.count(vars.name(in[i]))) continue;
    if (std::find(n.dropped.begin(), n.dropped.end(), in[i]) != n.dropped.end()) continue;
    n.carry.push_back(i);
    n.columns.push_back(in[i]);
  }
  switch (n.kind) {
    case PlanKind::ForClause:
    case PlanKind::LetClause:
    case PlanKind::CountClause:
      n.columns.push_back(n.var);
      break;
    case PlanKind::GroupByClause:
      for (VarId g : n.group_vars) n.columns.push_back(g);
      for (const AggregateSpec& a : n.aggregates) {
        n.columns.push_back(a.value);
        n.columns.push_back(a.error);
      }
      break;
    default:
      break;
  }
}

std::vector<PlanNode*> clause_chain(PlanNode& ret) {
  std::vector<PlanNode*> chain;
  for (PlanNode* c = &ret; c; c = c->input.get()) chain.push_back(c);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace jsoniq::detail
