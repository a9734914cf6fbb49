#pragma once

#include <vector>

#include "jsoniq/plan.hpp"

namespace jsoniq::detail {

// Computes `columns` and `carry` of a clause from its input layout.
void layout_clause(PlanNode& clause, const std::vector<VarId>& in, const VarTable& vars);

// Clauses of a FLWOR pipeline in execution order, ending with the return.
std::vector<PlanNode*> clause_chain(PlanNode& ret);

}  // namespace jsoniq::detail
