#include <algorithm>

#include "jsoniq/plan.hpp"

namespace jsoniq {

namespace {

bool partitioned(const PlanNode& n) { return n.mode >= ExecutionMode::PartitionedSequence; }

bool let_prefix(const PlanNode* c) {
  for (; c; c = c->input.get()) {
    if (c->kind != PlanKind::LetClause) return false;
  }
  return true;
}

// Result branches of a switch: per case the values then the result, then the
// default result.
std::vector<std::size_t> switch_results(const PlanNode& n) {
  std::vector<std::size_t> out;
  std::size_t at = 1;
  for (std::size_t values : n.case_sizes) {
    at += values;
    out.push_back(at++);
  }
  out.push_back(at);
  return out;
}

// A for clause binding evaluated once per FLWOR evaluation rather than per tuple.
bool evaluated_once(const PlanNode& n) {
  return n.kind == PlanKind::ForClause && (n.independent || let_prefix(n.input.get()));
}

void assign(PlanNode& n, bool local) {
  if (n.input) assign(*n.input, local);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    bool closure = is_closure_child(n, i) && !evaluated_once(n);
    assign(*n.children[i], local || closure);
  }
  n.mode = ExecutionMode::Local;
  n.lifts = false;
  if (local) return;
  auto lift_if = [&](bool cond) {
    if (cond) n.mode = ExecutionMode::PartitionedSequence;
  };
  switch (n.kind) {
    case PlanKind::Builtin:
      if (n.builtin == Builtin::JsonFile || n.builtin == Builtin::TextFile ||
          n.builtin == Builtin::Parallelize) {
        n.mode = ExecutionMode::PartitionedSequence;
      } else if (n.builtin == Builtin::Annotate) {
        n.mode = ExecutionMode::TupleFrame;
      }
      break;
    case PlanKind::Comma:
      lift_if(std::any_of(n.children.begin(), n.children.end(),
                          [](const PlanPtr& c) { return partitioned(*c); }));
      break;
    case PlanKind::ObjectLookup:
    case PlanKind::ArrayUnbox:
    case PlanKind::ArrayAccess:
    case PlanKind::Predicate:
    case PlanKind::SimpleMap:
      lift_if(partitioned(*n.children[0]));
      break;
    case PlanKind::If:
      lift_if(partitioned(*n.children[1]) || partitioned(*n.children[2]));
      break;
    case PlanKind::Switch: {
      bool any = false;
      for (std::size_t i : switch_results(n)) any = any || partitioned(*n.children[i]);
      lift_if(any);
      break;
    }
    case PlanKind::Typeswitch:
      lift_if(std::any_of(n.children.begin() + 1, n.children.end(),
                          [](const PlanPtr& c) { return partitioned(*c); }));
      break;
    case PlanKind::ForClause:
      if (n.input && n.input->mode == ExecutionMode::TupleFrame) {
        n.mode = ExecutionMode::TupleFrame;
      } else if (let_prefix(n.input.get()) && partitioned(*n.children[0])) {
        n.mode = ExecutionMode::TupleFrame;
        n.lifts = true;
      }
      break;
    case PlanKind::LetClause:
    case PlanKind::WhereClause:
    case PlanKind::GroupByClause:
    case PlanKind::OrderByClause:
    case PlanKind::CountClause:
      if (n.input && n.input->mode == ExecutionMode::TupleFrame) {
        n.mode = ExecutionMode::TupleFrame;
      }
      break;
    case PlanKind::ReturnClause:
      if (n.input && n.input->mode == ExecutionMode::TupleFrame) {
        n.mode = ExecutionMode::PartitionedSequence;
      }
      break;
    default:
      break;
  }
}

}  // namespace

void assign_modes(Plan& plan, bool force_local) { assign(*plan.root, force_local); }

}  // namespace jsoniq
