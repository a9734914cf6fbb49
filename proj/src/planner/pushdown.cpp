#include <algorithm>
#include <map>

#include "jsoniq/plan.hpp"
#include "layout.hpp"

namespace jsoniq {

namespace {

struct Use {
  PlanNode* ref;
  PlanNode* parent;  // null when the reference is the root of a clause expression
};

void find_uses(PlanNode& n, PlanNode* parent, VarId v, std::vector<Use>& out) {
  if (n.kind == PlanKind::VarRef && n.var == v) out.push_back({&n, parent});
  for (auto& c : n.children) find_uses(*c, &n, v, out);
  if (n.input) find_uses(*n.input, &n, v, out);
}

std::optional<AggregateKind> aggregate_of(const PlanNode* call) {
  if (!call || call->kind != PlanKind::Builtin || call->children.size() != 1) return std::nullopt;
  switch (call->builtin) {
    case Builtin::Count: return AggregateKind::Count;
    case Builtin::Sum: return AggregateKind::Sum;
    case Builtin::Avg: return AggregateKind::Avg;
    case Builtin::Min: return AggregateKind::Min;
    case Builtin::Max: return AggregateKind::Max;
    default: return std::nullopt;
  }
}

void rewrite_group(std::vector<PlanNode*>& chain, std::size_t at, VarTable& vars) {
  PlanNode& group = *chain[at];
  bool later_group = std::any_of(chain.begin() + at + 1, chain.end(), [](PlanNode* c) {
    return c->kind == PlanKind::GroupByClause;
  });
  std::vector<VarId> candidates;
  for (VarId c : group.columns) {
    if (std::find(group.group_vars.begin(), group.group_vars.end(), c) == group.group_vars.end()) {
      candidates.push_back(c);
    }
  }
  bool changed = false;
  for (VarId v : candidates) {
    std::vector<Use> uses;
    for (std::size_t k = at + 1; k < chain.size(); ++k) {
      for (auto& child : chain[k]->children) find_uses(*child, nullptr, v, uses);
    }
    if (uses.empty()) {
      group.dropped.push_back(v);
      changed = true;
      continue;
    }
    if (later_group) continue;
    bool all_aggregates = std::all_of(uses.begin(), uses.end(), [](const Use& u) {
      return aggregate_of(u.parent).has_value();
    });
    if (!all_aggregates) continue;
    std::map<AggregateKind, std::size_t> specs;
    for (const Use& u : uses) {
      AggregateKind kind = *aggregate_of(u.parent);
      auto it = specs.find(kind);
      if (it == specs.end()) {
        std::string label = "#" + std::string(aggregate_name(kind)) + "(" + vars.name(v) + ")";
        AggregateSpec spec{v, kind, vars.add(label), vars.add(label + "!error")};
        it = specs.emplace(kind, group.aggregates.size()).first;
        group.aggregates.push_back(spec);
      }
      const AggregateSpec& spec = group.aggregates[it->second];
      PlanNode& call = *u.parent;
      call.kind = PlanKind::AggregateRef;
      call.children.clear();
      call.var = spec.value;
      call.error_var = spec.error;
      call.mode = ExecutionMode::Local;
    }
    group.dropped.push_back(v);
    changed = true;
  }
  if (!changed) return;
  for (std::size_t k = at; k < chain.size(); ++k) {
    const std::vector<VarId> empty;
    const std::vector<VarId>& in = k == 0 ? empty : chain[k - 1]->columns;
    detail::layout_clause(*chain[k], in, vars);
  }
}

void walk(PlanNode& n, VarTable& vars) {
  for (auto& c : n.children) walk(*c, vars);
  if (n.input) walk(*n.input, vars);
  if (n.kind != PlanKind::ReturnClause) return;
  std::vector<PlanNode*> chain = detail::clause_chain(n);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i]->kind == PlanKind::GroupByClause) rewrite_group(chain, i, vars);
  }
}

}  // namespace

void rewrite_aggregate_pushdown(Plan& plan) { walk(*plan.root, plan.vars); }

}  // namespace jsoniq
