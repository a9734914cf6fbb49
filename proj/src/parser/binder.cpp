#include <string>
#include <utility>
#include <vector>

#include "jsoniq/parser.hpp"

namespace jsoniq {

namespace {

class Binder {
 public:
  explicit Binder(VarTable& table) : table_(table) {}

  VarId declare(const std::string& name) {
    VarId id = table_.add(name);
    scope_.emplace_back(name, id);
    return id;
  }

  void bind(Expr& e) {
    switch (e.kind) {
      case ExprKind::VarRef:
        e.var = lookup(e.name, e.span);
        return;
      case ExprKind::ContextItem:
        if (focus_ == 0) {
          throw QueryError(ErrorCode::UnresolvedVariable,
                           "$$ used outside a predicate or simple map", e.span);
        }
        return;
      case ExprKind::Predicate:
      case ExprKind::SimpleMap:
        bind(*e.children[0]);
        ++focus_;
        bind(*e.children[1]);
        --focus_;
        return;
      case ExprKind::Quantified: {
        std::size_t mark = scope_.size();
        e.var_ids.clear();
        for (std::size_t i = 0; i < e.var_names.size(); ++i) {
          bind(*e.children[i]);
          e.var_ids.push_back(declare(e.var_names[i]));
        }
        bind(*e.children.back());
        scope_.resize(mark);
        return;
      }
      case ExprKind::Typeswitch: {
        bind(*e.children[0]);
        for (std::size_t i = 0; i < e.cases.size(); ++i) {
          std::size_t mark = scope_.size();
          if (!e.cases[i].var.empty()) e.cases[i].id = declare(e.cases[i].var);
          bind(*e.children[i + 1]);
          scope_.resize(mark);
        }
        std::size_t mark = scope_.size();
        if (!e.default_var.empty()) e.default_id = declare(e.default_var);
        bind(*e.children.back());
        scope_.resize(mark);
        return;
      }
      case ExprKind::Flwor:
        bind_flwor(e);
        return;
      default:
        for (auto& child : e.children) bind(*child);
        return;
    }
  }

 private:
  VarId lookup(const std::string& name, const SourceSpan& span) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw QueryError(ErrorCode::UnresolvedVariable,
                     "unresolved variable $" + name, span);
  }

  void bind_flwor(Expr& e) {
    std::size_t mark = scope_.size();
    for (Clause& c : e.clauses) {
      switch (c.kind) {
        case ClauseKind::For:
        case ClauseKind::Let:
          bind(*c.expr);
          c.id = declare(c.var);
          break;
        case ClauseKind::Where:
          bind(*c.expr);
          break;
        case ClauseKind::GroupBy:
          bind_group_by(c);
          break;
        case ClauseKind::OrderBy:
          for (OrderSpec& o : c.order_specs) bind(*o.expr);
          break;
        case ClauseKind::Count:
          c.id = declare(c.var);
          break;
      }
    }
    bind(*e.children[0]);
    scope_.resize(mark);
  }

  void bind_group_by(Clause& c) {
    // Keys are evaluated against the incoming tuple; the grouping variables
    // become visible only after the clause.
    std::vector<std::pair<std::string, VarId>> introduced;
    for (GroupSpec& g : c.group_specs) {
      if (g.expr) {
        bind(*g.expr);
        std::string name = g.var.empty() ? "#key" + std::to_string(++anon_) : g.var;
        g.id = table_.add(name);
        if (!g.var.empty()) introduced.emplace_back(name, g.id);
      } else {
        VarId source = lookup(g.var, g.span);
        g.id = table_.add(g.var);
        auto ref = std::make_unique<Expr>(ExprKind::VarRef, g.span);
        ref->name = g.var;
        ref->var = source;
        g.expr = std::move(ref);
        introduced.emplace_back(g.var, g.id);
      }
    }
    for (auto& entry : introduced) scope_.push_back(std::move(entry));
  }

  VarTable& table_;
  std::vector<std::pair<std::string, VarId>> scope_;
  int focus_ = 0;
  int anon_ = 0;
};

}  // namespace

BoundVariables bind_variables(Ast& ast, const std::vector<std::string>& externals) {
  BoundVariables result;
  Binder binder(result.table);
  for (const auto& name : externals) result.externals.push_back(binder.declare(name));
  binder.bind(*ast.root);
  return result;
}

}  // namespace jsoniq
