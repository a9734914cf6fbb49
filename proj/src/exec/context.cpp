#include "jsoniq/context.hpp"

#include "jsoniq/errors.hpp"

namespace jsoniq {

ContextPtr DynamicContext::root() { return std::make_shared<DynamicContext>(); }

ContextPtr DynamicContext::with_variable(ContextPtr parent, VarId id, Sequence value) {
  auto ctx = std::make_shared<DynamicContext>();
  ctx->parent_ = std::move(parent);
  ctx->bindings_.emplace_back(id, std::move(value));
  return ctx;
}

ContextPtr DynamicContext::with_variables(ContextPtr parent,
                                          std::vector<std::pair<VarId, Sequence>> bindings) {
  auto ctx = std::make_shared<DynamicContext>();
  ctx->parent_ = std::move(parent);
  ctx->bindings_ = std::move(bindings);
  return ctx;
}

ContextPtr DynamicContext::with_focus(ContextPtr parent, Item item) {
  auto ctx = std::make_shared<DynamicContext>();
  ctx->parent_ = std::move(parent);
  ctx->focus_ = std::move(item);
  return ctx;
}

const Sequence* DynamicContext::find(VarId id) const {
  for (const DynamicContext* c = this; c; c = c->parent_.get()) {
    for (auto it = c->bindings_.rbegin(); it != c->bindings_.rend(); ++it) {
      if (it->first == id) return &it->second;
    }
  }
  return nullptr;
}

const Sequence& DynamicContext::lookup(VarId id) const {
  const Sequence* s = find(id);
  if (!s) {
    throw QueryError(ErrorCode::UnresolvedVariable,
                     "variable #" + std::to_string(id) + " has no value");
  }
  return *s;
}

const Item* DynamicContext::context_item() const {
  for (const DynamicContext* c = this; c; c = c->parent_.get()) {
    if (c->focus_) return &*c->focus_;
  }
  return nullptr;
}

}  // namespace jsoniq
