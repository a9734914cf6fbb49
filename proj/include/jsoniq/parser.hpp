#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jsoniq/ast.hpp"

namespace jsoniq {

// Parses a query of the supported JSONiq subset. Throws SyntaxError with the
// span and the set of expected tokens on failure. Variables are not resolved
// here; see bind_variables.
Ast parse_query(std::string_view text);

struct BoundVariables {
  VarTable table;
  std::vector<VarId> externals;  // same order as the external names given
};

// Resolves every variable reference lexically and assigns each declaration a
// fresh VarId. Names in `externals` are visible at the top level. Throws
// UnresolvedVariable for unknown names and for $$ outside a predicate or
// simple map.
BoundVariables bind_variables(Ast& ast,
                              const std::vector<std::string>& externals = {});

}  // namespace jsoniq
