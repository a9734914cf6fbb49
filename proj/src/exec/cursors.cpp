#include <algorithm>

#include "internal.hpp"
#include "jsoniq/atomic.hpp"

namespace jsoniq {

void LocalCursor::open(ContextPtr ctx) {
  if (open_) throw QueryError(ErrorCode::CursorProtocol, "open() on an open cursor");
  ctx_ = std::move(ctx);
  open_ = true;
  pulled_ = false;
  lookahead_.reset();
  detail::with_span(span_, [&] { on_open(); });
}

void LocalCursor::pull() {
  if (pulled_) return;
  lookahead_ = detail::with_span(span_, [&] { return fetch(); });
  pulled_ = true;
}

bool LocalCursor::has_next() {
  if (!open_) throw QueryError(ErrorCode::CursorProtocol, "has_next() on a closed cursor");
  pull();
  return lookahead_.has_value();
}

Item LocalCursor::next() {
  if (!has_next()) throw QueryError(ErrorCode::CursorProtocol, "next() past the end");
  pulled_ = false;
  Item out = std::move(*lookahead_);
  lookahead_.reset();
  return out;
}

void LocalCursor::reset(ContextPtr ctx) {
  if (!open_) throw QueryError(ErrorCode::CursorProtocol, "reset() on a closed cursor");
  close();
  open(std::move(ctx));
}

void LocalCursor::close() {
  if (!open_) return;
  open_ = false;
  lookahead_.reset();
  on_close();
  ctx_.reset();
}

Sequence drain(LocalCursor& cursor, ContextPtr ctx) {
  if (cursor.is_open()) cursor.reset(std::move(ctx));
  else cursor.open(std::move(ctx));
  std::vector<Item> items;
  while (cursor.has_next()) items.push_back(cursor.next());
  cursor.close();
  return Sequence(std::move(items));
}

namespace detail {

namespace {

using CursorPtr = std::unique_ptr<LocalCursor>;

// Computes the whole result on open and replays it.
class ReplayCursor : public LocalCursor {
 public:
  using LocalCursor::LocalCursor;

 protected:
  virtual Sequence compute() = 0;
  void on_open() override {
    items_ = compute();
    pos_ = 0;
  }
  std::optional<Item> fetch() override {
    if (pos_ < items_.size()) return items_[pos_++];
    return std::nullopt;
  }
  void on_close() override { items_ = Sequence(); }

 private:
  Sequence items_;
  std::size_t pos_ = 0;
};

class NodeCursor : public ReplayCursor {
 public:
  NodeCursor(const Executor& ex, const PlanNode& node)
      : ReplayCursor(node.span), ex_(ex), node_(node) {
    for (const auto& c : node.children) children_.push_back(ex.cursor(*c));
  }

 protected:
  Sequence eval(std::size_t i) { return drain(*children_[i], context()); }
  Sequence eval(std::size_t i, const ContextPtr& ctx) { return drain(*children_[i], ctx); }

  const Executor& ex_;
  const PlanNode& node_;
  std::vector<CursorPtr> children_;
};

class MaterializeCursor : public ReplayCursor {
 public:
  MaterializeCursor(const Executor& ex, const PlanNode& node)
      : ReplayCursor(node.span), ex_(ex), node_(node) {}

 protected:
  Sequence compute() override { return collect(ex_.partitioned(node_, context()), ex_.pool()); }

 private:
  const Executor& ex_;
  const PlanNode& node_;
};

class ScalarCursor : public NodeCursor {
 public:
  using NodeCursor::NodeCursor;

 protected:
  Sequence compute() override {
    const PlanNode& n = node_;
    switch (n.kind) {
      case PlanKind::Literal: return n.literal;
      case PlanKind::EmptySequence: return {};
      case PlanKind::VarRef: return context()->lookup(n.var);
      case PlanKind::ContextItem: {
        const Item* item = context()->context_item();
        if (!item) throw QueryError(ErrorCode::UnresolvedVariable, "no context item for $$");
        return *item;
      }
      case PlanKind::AggregateRef:
        rethrow_encoded(context()->lookup(n.error_var));
        return context()->lookup(n.var);
      case PlanKind::ObjectConstructor: return object();
      case PlanKind::ArrayConstructor: {
        if (children_.empty()) return Item::array({});
        Sequence content = eval(0);
        return Item::array(std::vector<Item>(content.begin(), content.end()));
      }
      case PlanKind::Arithmetic: return arith(n.arith_op, eval(0), eval(1));
      case PlanKind::Negate: {
        auto v = atomize_optional(eval(0), "unary minus");
        return v ? Sequence(negate(*v)) : Sequence();
      }
      case PlanKind::ValueComparison: {
        auto a = atomize_optional(eval(0), "value comparison");
        auto b = atomize_optional(eval(1), "value comparison");
        if (!a || !b) return {};
        return Item::boolean(compare_atomics(*a, *b, n.compare_op));
      }
      case PlanKind::GeneralComparison: return general_compare();
      case PlanKind::And:
        if (!effective_boolean_value(eval(0))) return Item::boolean(false);
        return Item::boolean(effective_boolean_value(eval(1)));
      case PlanKind::Or:
        if (effective_boolean_value(eval(0))) return Item::boolean(true);
        return Item::boolean(effective_boolean_value(eval(1)));
      case PlanKind::Not: return Item::boolean(!effective_boolean_value(eval(0)));
      case PlanKind::StringConcat: {
        std::string out;
        for (std::size_t i = 0; i < 2; ++i) {
          auto v = atomize_optional(eval(i), "string concatenation");
          if (v) out += string_value(*v);
        }
        return Item::string(out);
      }
      case PlanKind::Builtin: return builtin();
      case PlanKind::TryCatch: return try_catch();
      case PlanKind::Cast: {
        auto v = atomize_optional(eval(0), "cast");
        if (!v) {
          if (n.allow_empty) return {};
          throw QueryError(ErrorCode::TypeError, "cannot cast the empty sequence to " +
                                                     std::string(atomic_type_name(n.cast_type)));
        }
        return cast_item(*v, n.cast_type);
      }
      case PlanKind::Castable: {
        Sequence s = eval(0);
        if (s.empty()) return Item::boolean(n.allow_empty);
        if (s.size() > 1 || !s[0].is_atomic()) return Item::boolean(false);
        return Item::boolean(castable(s[0], n.cast_type));
      }
      case PlanKind::InstanceOf: return Item::boolean(instance_of(eval(0), n.sequence_type));
      case PlanKind::Treat: {
        Sequence s = eval(0);
        if (!instance_of(s, n.sequence_type)) {
          throw QueryError(ErrorCode::TreatError,
                           "value does not match " + n.sequence_type.to_string());
        }
        return s;
      }
      case PlanKind::Quantified: return Item::boolean(quantify(0, context()));
      default:
        break;
    }
    throw QueryError(ErrorCode::UnsupportedFeature, "cannot evaluate " + plan_kind_name(n));
  }

 private:
  Sequence object() {
    std::vector<std::pair<std::string, Item>> members;
    for (std::size_t i = 0; i + 1 < children_.size(); i += 2) {
      auto key = atomize_optional(eval(i), "object key");
      if (!key || !key->is_string()) {
        throw QueryError(ErrorCode::TypeError, "object keys must be strings");
      }
      for (const auto& m : members) {
        if (m.first == key->as_string()) {
          throw QueryError(ErrorCode::DuplicateKey, "duplicate key \"" + m.first + "\"");
        }
      }
      Sequence value = eval(i + 1);
      Item v = value.empty() ? Item::null()
               : value.size() == 1
                   ? value[0]
                   : Item::array(std::vector<Item>(value.begin(), value.end()));
      members.emplace_back(key->as_string(), std::move(v));
    }
    return Item::object(std::move(members));
  }

  Sequence general_compare() {
    Sequence a = eval(0), b = eval(1);
    auto check = [](const Item& v) {
      if (!v.is_atomic()) {
        throw QueryError(ErrorCode::TypeError, "general comparison expects atomic values, got " +
                                                   std::string(item_type_name(v.type())));
      }
    };
    for (const Item& x : a) check(x);
    for (const Item& y : b) check(y);
    for (const Item& x : a) {
      for (const Item& y : b) {
        if (compare_atomics(x, y, node_.compare_op)) return Item::boolean(true);
      }
    }
    return Item::boolean(false);
  }

  Sequence builtin() {
    const PlanNode& n = node_;
    if (auto kind = aggregate_kind(n.builtin)) {
      const PlanNode& arg = *n.children[0];
      if (arg.mode >= ExecutionMode::PartitionedSequence) {
        return aggregate_items(ex_.partitioned(arg, context()), *kind, ex_.pool()).result();
      }
      AggregateState state(*kind);
      LocalCursor& c = *children_[0];
      c.open(context());
      while (c.has_next()) state.add(c.next());
      c.close();
      return state.result();
    }
    switch (n.builtin) {
      case Builtin::Exists:
      case Builtin::Empty: {
        LocalCursor& c = *children_[0];
        c.open(context());
        bool any = c.has_next();
        c.close();
        return Item::boolean(n.builtin == Builtin::Exists ? any : !any);
      }
      case Builtin::Parallelize: {
        Sequence s = eval(0);
        if (children_.size() > 1) partition_count(eval(1));
        return s;
      }
      case Builtin::Annotate: {
        Sequence s = eval(0);
        auto schema = atomize_schema(eval(1));
        std::vector<Item> out;
        for (std::size_t i = 0; i < s.size(); ++i) out.push_back(annotate_item(s[i], schema, i + 1));
        return Sequence(std::move(out));
      }
      default:
        break;
    }
    std::vector<Sequence> args;
    for (std::size_t i = 0; i < children_.size(); ++i) args.push_back(eval(i));
    return call_builtin(n.builtin, args);
  }

  static Schema atomize_schema(const Sequence& s) {
    if (s.size() != 1) throw QueryError(ErrorCode::InvalidArgument, "annotate() expects one schema object");
    return parse_schema(s[0]);
  }

  Sequence try_catch() {
    try {
      return eval(0);
    } catch (const QueryError& e) {
      if (is_static_error(e.code())) throw;
      std::string_view name = error_code_name(e.code());
      for (std::size_t i = 0; i < node_.catch_codes.size(); ++i) {
        for (const std::string& code : node_.catch_codes[i]) {
          std::string_view c = code;
          if (c.starts_with("err:")) c.remove_prefix(4);
          if (c == "*" || c == name) return eval(i + 1);
        }
      }
      throw;
    }
  }

  bool quantify(std::size_t i, const ContextPtr& ctx) {
    std::size_t bindings = node_.vars.size();
    if (i == bindings) return effective_boolean_value(eval(bindings, ctx));
    Sequence values = eval(i, ctx);
    for (const Item& v : values) {
      bool r = quantify(i + 1, DynamicContext::with_variable(ctx, node_.vars[i], v));
      if (!node_.every && r) return true;
      if (node_.every && !r) return false;
    }
    return node_.every;
  }

 public:
  static std::size_t partition_count(const Sequence& s) {
    auto v = atomize_optional(s, "partition count");
    if (!v || !v->is_integer() || v->as_integer() < 1 || v->as_integer() > 1000000) {
      throw QueryError(ErrorCode::InvalidArgument, "partition count must be an integer >= 1");
    }
    return static_cast<std::size_t>(v->as_integer());
  }
};

class CommaCursor : public LocalCursor {
 public:
  CommaCursor(const Executor& ex, const PlanNode& node) : LocalCursor(node.span) {
    for (const auto& c : node.children) children_.push_back(ex.cursor(*c));
  }

 protected:
  void on_open() override {
    index_ = 0;
    if (!children_.empty()) children_[0]->open(context());
  }
  std::optional<Item> fetch() override {
    while (index_ < children_.size()) {
      LocalCursor& c = *children_[index_];
      if (c.has_next()) return c.next();
      c.close();
      if (++index_ < children_.size()) children_[index_]->open(context());
    }
    return std::nullopt;
  }
  void on_close() override {
    if (index_ < children_.size()) children_[index_]->close();
  }

 private:
  std::vector<CursorPtr> children_;
  std::size_t index_ = 0;
};

class RangeCursor : public NodeCursor {
 public:
  using NodeCursor::NodeCursor;

 protected:
  Sequence compute() override { return {}; }
  void on_open() override {
    auto a = atomize_optional(eval(0), "range");
    auto b = atomize_optional(eval(1), "range");
    done_ = !a || !b;
    if (done_) return;
    if (!a->is_integer() || !b->is_integer()) {
      throw QueryError(ErrorCode::TypeError, "range bounds must be integers");
    }
    current_ = a->as_integer();
    last_ = b->as_integer();
    done_ = current_ > last_;
  }
  std::optional<Item> fetch() override {
    if (done_) return std::nullopt;
    Item out = Item::integer(current_);
    if (current_ == last_) done_ = true;
    else ++current_;
    return out;
  }
  void on_close() override {}

 private:
  Integer current_, last_;
  bool done_ = true;
};

// Flat-maps each input item through a step producing zero or more items.
class StepCursor : public LocalCursor {
 public:
  StepCursor(const Executor& ex, const PlanNode& node) : LocalCursor(node.span), node_(node) {
    for (const auto& c : node.children) children_.push_back(ex.cursor(*c));
  }

 protected:
  void on_open() override {
    pending_.clear();
    pos_ = 0;
    position_ = 0;
    prepare();
    children_[0]->open(context());
  }
  std::optional<Item> fetch() override {
    for (;;) {
      if (pos_ < pending_.size()) return pending_[pos_++];
      pending_.clear();
      pos_ = 0;
      if (finished_ || !children_[0]->has_next()) return std::nullopt;
      Item item = children_[0]->next();
      ++position_;
      step(item);
    }
  }
  void on_close() override {
    children_[0]->close();
    pending_.clear();
  }

  virtual void prepare() {}
  virtual void step(const Item& item) = 0;
  void emit(const Item& item) { pending_.push_back(item); }
  ItemSink sink() {
    return [this](const Item& item) { pending_.push_back(item); };
  }

  const PlanNode& node_;
  std::vector<CursorPtr> children_;
  std::uint64_t position_ = 0;
  bool finished_ = false;

 private:
  std::vector<Item> pending_;
  std::size_t pos_ = 0;
};

class LookupCursor : public StepCursor {
 public:
  using StepCursor::StepCursor;

 protected:
  void prepare() override {
    key_ = children_.size() > 1 ? lookup_key(drain(*children_[1], context())) : node_.name;
  }
  void step(const Item& item) override {
    if (!item.is_object()) return;
    if (const Item* v = item.member(key_)) emit(*v);
  }

 private:
  std::string key_;
};

class UnboxCursor : public StepCursor {
 public:
  using StepCursor::StepCursor;

 protected:
  void step(const Item& item) override {
    if (!item.is_array()) return;
    for (const Item& v : item.as_array().members()) emit(v);
  }
};

class AccessCursor : public StepCursor {
 public:
  using StepCursor::StepCursor;

 protected:
  void prepare() override { index_ = access_index(drain(*children_[1], context())); }
  void step(const Item& item) override { access_step(item, index_, sink()); }

 private:
  std::optional<std::int64_t> index_;
};

class PredicateCursor : public StepCursor {
 public:
  using StepCursor::StepCursor;

 protected:
  void prepare() override {
    finished_ = false;
    const PlanNode& pred = *node_.children[1];
    fixed_.reset();
    if (pred.kind == PlanKind::Literal && pred.literal.is_integer()) {
      const Integer& v = pred.literal.as_integer();
      fixed_ = v < 1 ? 0 : static_cast<std::uint64_t>(std::min<Integer>(v, Integer(UINT64_MAX / 2)));
      if (*fixed_ == 0) finished_ = true;
    }
  }
  void step(const Item& item) override {
    if (fixed_) {
      if (position_ == *fixed_) {
        emit(item);
        finished_ = true;
      }
      return;
    }
    Sequence r = drain(*children_[1], DynamicContext::with_focus(context(), item));
    if (predicate_keeps(r, position_)) emit(item);
  }

 private:
  std::optional<std::uint64_t> fixed_;
};

class SimpleMapCursor : public LocalCursor {
 public:
  SimpleMapCursor(const Executor& ex, const PlanNode& node) : LocalCursor(node.span) {
    input_ = ex.cursor(*node.children[0]);
    mapping_ = ex.cursor(*node.children[1]);
  }

 protected:
  void on_open() override { input_->open(context()); }
  std::optional<Item> fetch() override {
    for (;;) {
      if (mapping_->is_open()) {
        if (mapping_->has_next()) return mapping_->next();
        mapping_->close();
      }
      if (!input_->has_next()) return std::nullopt;
      mapping_->open(DynamicContext::with_focus(context(), input_->next()));
    }
  }
  void on_close() override {
    mapping_->close();
    input_->close();
  }

 private:
  CursorPtr input_, mapping_;
};

class BranchCursor : public NodeCursor {
 public:
  using NodeCursor::NodeCursor;

 protected:
  Sequence compute() override { return {}; }
  void on_open() override {
    Branch b = choose_branch(node_, context(), [this](std::size_t i, const ContextPtr& ctx) {
      return eval(i, ctx);
    });
    chosen_ = b.child;
    children_[chosen_]->open(b.ctx);
  }
  std::optional<Item> fetch() override {
    LocalCursor& c = *children_[chosen_];
    if (c.has_next()) return c.next();
    return std::nullopt;
  }
  void on_close() override { children_[chosen_]->close(); }

 private:
  std::size_t chosen_ = 0;
};

class SourceCursor : public NodeCursor {
 public:
  using NodeCursor::NodeCursor;

 protected:
  Sequence compute() override { return {}; }
  void on_open() override {
    auto pattern = atomize_optional(eval(0), plan_kind_name(node_));
    if (!pattern || !pattern->is_string()) {
      throw QueryError(ErrorCode::InvalidArgument, plan_kind_name(node_) + " expects a path string");
    }
    if (children_.size() > 1) ScalarCursor::partition_count(eval(1));
    ex_.stats().record_source_call();
    auto files = expand_pattern(pattern->as_string());
    std::vector<FileRange> ranges;
    for (auto& part : split_files(files, 1)) {
      for (auto& r : part) ranges.push_back(std::move(r));
    }
    reader_ = std::make_unique<LineReader>(std::move(ranges), &ex_.stats());
  }
  std::optional<Item> fetch() override {
    std::string_view line;
    SourceOptions opts = ex_.source_options();
    while (reader_->next(line)) {
      if (node_.builtin == Builtin::TextFile) return Item::string(std::string(line));
      if (auto item = parse_record(line, *reader_, opts)) return item;
    }
    return std::nullopt;
  }
  void on_close() override { reader_.reset(); }

 private:
  std::unique_ptr<LineReader> reader_;
};

}  // namespace

std::unique_ptr<LocalCursor> make_expr_cursor(const Executor& ex, const PlanNode& node) {
  switch (node.kind) {
    case PlanKind::ReturnClause: return make_return_cursor(ex, node);
    case PlanKind::Comma: return std::make_unique<CommaCursor>(ex, node);
    case PlanKind::Range: return std::make_unique<RangeCursor>(ex, node);
    case PlanKind::ObjectLookup: return std::make_unique<LookupCursor>(ex, node);
    case PlanKind::ArrayUnbox: return std::make_unique<UnboxCursor>(ex, node);
    case PlanKind::ArrayAccess: return std::make_unique<AccessCursor>(ex, node);
    case PlanKind::Predicate: return std::make_unique<PredicateCursor>(ex, node);
    case PlanKind::SimpleMap: return std::make_unique<SimpleMapCursor>(ex, node);
    case PlanKind::If:
    case PlanKind::Switch:
    case PlanKind::Typeswitch:
      return std::make_unique<BranchCursor>(ex, node);
    case PlanKind::Builtin:
      if (node.builtin == Builtin::JsonFile || node.builtin == Builtin::TextFile) {
        return std::make_unique<SourceCursor>(ex, node);
      }
      return std::make_unique<ScalarCursor>(ex, node);
    default:
      return std::make_unique<ScalarCursor>(ex, node);
  }
}

std::unique_ptr<LocalCursor> make_materialize_cursor(const Executor& ex, const PlanNode& node) {
  return std::make_unique<MaterializeCursor>(ex, node);
}

std::size_t partition_count(const Sequence& s) { return ScalarCursor::partition_count(s); }

}  // namespace detail

}  // namespace jsoniq
