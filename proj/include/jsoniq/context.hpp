#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "jsoniq/ast.hpp"
#include "jsoniq/item.hpp"

namespace jsoniq {

class DynamicContext;
using ContextPtr = std::shared_ptr<const DynamicContext>;

// Immutable chain of variable bindings plus an optional context item ($$).
// Shared between threads once built.
class DynamicContext {
 public:
  static ContextPtr root();
  static ContextPtr with_variable(ContextPtr parent, VarId id, Sequence value);
  static ContextPtr with_variables(ContextPtr parent,
                                   std::vector<std::pair<VarId, Sequence>> bindings);
  static ContextPtr with_focus(ContextPtr parent, Item item);

  // Innermost binding of the variable, or nullptr.
  const Sequence* find(VarId id) const;
  const Sequence& lookup(VarId id) const;
  const Item* context_item() const;

 private:
  ContextPtr parent_;
  std::vector<std::pair<VarId, Sequence>> bindings_;
  std::optional<Item> focus_;
};

}  // namespace jsoniq
