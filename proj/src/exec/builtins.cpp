#include <cmath>

#include "internal.hpp"
#include "jsoniq/atomic.hpp"

namespace jsoniq::detail {

namespace {

std::string text_arg(const Sequence& seq, const char* fn) {
  auto v = atomize_optional(seq, fn);
  return v ? string_value(*v) : std::string();
}

std::optional<double> number_arg(const Sequence& seq, const char* fn) {
  auto v = atomize_optional(seq, fn);
  if (!v) return std::nullopt;
  if (!v->is_numeric()) {
    throw QueryError(ErrorCode::TypeError, std::string(fn) + "() expects a number, got " +
                                               std::string(item_type_name(v->type())));
  }
  return numeric_to_double(*v);
}

std::vector<std::uint32_t> codepoints(const std::string& s) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    std::uint32_t cp = len == 1 ? c : len == 2 ? c & 0x1F : len == 3 ? c & 0x0F : c & 0x07;
    for (int k = 1; k < len && i + k < s.size(); ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

// Byte offset of each codepoint start, plus the total size.
std::vector<std::size_t> codepoint_offsets(const std::string& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size();) {
    out.push_back(i);
    auto c = static_cast<unsigned char>(s[i]);
    i += c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
  }
  out.push_back(s.size());
  return out;
}

double round_half_up(double x) {
  if (!std::isfinite(x)) return x;
  double f = std::floor(x);
  double r = x - f >= 0.5 ? f + 1 : f;
  return r == 0 && std::signbit(x) ? -0.0 : r;
}

Sequence substring(const std::vector<Sequence>& args) {
  std::string s = text_arg(args[0], "substring");
  auto start = number_arg(args[1], "substring");
  if (!start) throw QueryError(ErrorCode::TypeError, "substring() start must not be empty");
  double first = round_half_up(*start);
  double last = std::numeric_limits<double>::infinity();
  if (args.size() > 2) {
    auto len = number_arg(args[2], "substring");
    if (!len) throw QueryError(ErrorCode::TypeError, "substring() length must not be empty");
    last = first + round_half_up(*len);
  }
  auto offsets = codepoint_offsets(s);
  std::size_t n = offsets.size() - 1;
  std::string out;
  if (std::isnan(first) || std::isnan(last)) return Item::string("");
  for (std::size_t p = 1; p <= n; ++p) {
    auto pos = static_cast<double>(p);
    if (pos >= first && pos < last) out.append(s, offsets[p - 1], offsets[p] - offsets[p - 1]);
  }
  return Item::string(out);
}

Item abs_of(const Item& v) {
  switch (v.type()) {
    case ItemType::Integer: return Item::integer(Integer(abs(v.as_integer())));
    case ItemType::Decimal:
      return v.as_decimal().sign() < 0 ? Item::decimal(-v.as_decimal()) : v;
    case ItemType::Double: return Item::make_double(std::fabs(v.as_double()));
    default:
      throw QueryError(ErrorCode::TypeError,
                       "abs() expects a number, got " + std::string(item_type_name(v.type())));
  }
}

Item round_of(const Item& v) {
  switch (v.type()) {
    case ItemType::Integer: return v;
    case ItemType::Decimal: return Item::decimal(Decimal::from_integer(v.as_decimal().round_half_up()));
    case ItemType::Double: return Item::make_double(round_half_up(v.as_double()));
    default:
      throw QueryError(ErrorCode::TypeError,
                       "round() expects a number, got " + std::string(item_type_name(v.type())));
  }
}

std::string ascii_case(std::string s, bool upper) {
  for (char& c : s) {
    if (upper && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    if (!upper && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

}  // namespace

std::optional<AggregateKind> aggregate_kind(Builtin id) {
  switch (id) {
    case Builtin::Count: return AggregateKind::Count;
    case Builtin::Sum: return AggregateKind::Sum;
    case Builtin::Avg: return AggregateKind::Avg;
    case Builtin::Min: return AggregateKind::Min;
    case Builtin::Max: return AggregateKind::Max;
    default: return std::nullopt;
  }
}

Sequence call_builtin(Builtin id, const std::vector<Sequence>& args) {
  switch (id) {
    case Builtin::Count:
    case Builtin::Sum:
    case Builtin::Avg:
    case Builtin::Min:
    case Builtin::Max: {
      AggregateState state(*aggregate_kind(id));
      state.add_all(args[0]);
      return state.result();
    }
    case Builtin::String: {
      auto v = atomize_optional(args[0], "string()");
      return Item::string(v ? string_value(*v) : std::string());
    }
    case Builtin::Concat: {
      std::string out;
      for (const auto& a : args) out += text_arg(a, "concat()");
      return Item::string(out);
    }
    case Builtin::Substring:
      return substring(args);
    case Builtin::StringLength:
      return Item::integer(
          static_cast<std::int64_t>(codepoints(text_arg(args[0], "string-length()")).size()));
    case Builtin::Contains:
      return Item::boolean(text_arg(args[0], "contains()").find(text_arg(args[1], "contains()")) !=
                           std::string::npos);
    case Builtin::StartsWith:
      return Item::boolean(
          text_arg(args[0], "starts-with()").starts_with(text_arg(args[1], "starts-with()")));
    case Builtin::LowerCase:
      return Item::string(ascii_case(text_arg(args[0], "lower-case()"), false));
    case Builtin::UpperCase:
      return Item::string(ascii_case(text_arg(args[0], "upper-case()"), true));
    case Builtin::Size: {
      if (args[0].empty()) return {};
      if (args[0].size() > 1 || !args[0][0].is_array()) {
        throw QueryError(ErrorCode::TypeError, "size() expects one array");
      }
      return Item::integer(static_cast<std::int64_t>(args[0][0].as_array().size()));
    }
    case Builtin::Keys: {
      std::vector<Item> out;
      std::vector<std::string> seen;
      for (const Item& v : args[0]) {
        if (!v.is_object()) continue;
        for (const auto& [k, _] : v.as_object().members()) {
          if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
          seen.push_back(k);
          out.push_back(Item::string(k));
        }
      }
      return Sequence(std::move(out));
    }
    case Builtin::Values: {
      std::vector<Item> out;
      for (const Item& v : args[0]) {
        if (!v.is_object()) continue;
        for (const auto& [_, value] : v.as_object().members()) out.push_back(value);
      }
      return Sequence(std::move(out));
    }
    case Builtin::Boolean:
      return Item::boolean(effective_boolean_value(args[0]));
    case Builtin::Not:
      return Item::boolean(!effective_boolean_value(args[0]));
    case Builtin::Abs: {
      auto v = atomize_optional(args[0], "abs()");
      return v ? Sequence(abs_of(*v)) : Sequence();
    }
    case Builtin::Round: {
      auto v = atomize_optional(args[0], "round()");
      return v ? Sequence(round_of(*v)) : Sequence();
    }
    case Builtin::Exists:
      return Item::boolean(!args[0].empty());
    case Builtin::Empty:
      return Item::boolean(args[0].empty());
    case Builtin::JsonFile:
    case Builtin::TextFile:
    case Builtin::Parallelize:
    case Builtin::Annotate:
      break;
  }
  throw QueryError(ErrorCode::UnsupportedFeature, "source functions need an executor");
}

bool predicate_keeps(const Sequence& result, std::uint64_t position) {
  if (result.size() == 1 && result[0].is_numeric()) {
    auto cmp = three_way_compare(result[0], Item::integer(static_cast<std::int64_t>(position)));
    return cmp && *cmp == 0;
  }
  return effective_boolean_value(result);
}

std::string lookup_key(const Sequence& key) {
  auto v = atomize_optional(key, "object lookup");
  if (!v) throw QueryError(ErrorCode::TypeError, "object lookup key is empty");
  return string_value(*v);
}

std::optional<std::int64_t> access_index(const Sequence& index) {
  auto v = atomize_optional(index, "array access");
  if (!v) return std::nullopt;
  if (!v->is_numeric()) {
    throw QueryError(ErrorCode::TypeError, "array index must be a number, got " +
                                               std::string(item_type_name(v->type())));
  }
  if (v->is_integer()) {
    const Integer& i = v->as_integer();
    if (i > 0 && i <= Integer(std::numeric_limits<std::int64_t>::max())) {
      return static_cast<std::int64_t>(i);
    }
    return std::nullopt;
  }
  double d = numeric_to_double(*v);
  if (d >= 1 && d < 9e18 && std::floor(d) == d) return static_cast<std::int64_t>(d);
  return std::nullopt;
}

void lookup_step(const Item& item, const std::string& key, const ItemSink& sink) {
  if (!item.is_object()) return;
  if (const Item* v = item.member(key)) sink(*v);
}

void unbox_step(const Item& item, const ItemSink& sink) {
  if (!item.is_array()) return;
  for (const Item& v : item.as_array().members()) sink(v);
}

void access_step(const Item& item, const std::optional<std::int64_t>& index, const ItemSink& sink) {
  if (!index || !item.is_array()) return;
  const auto& members = item.as_array().members();
  if (static_cast<std::uint64_t>(*index) <= members.size()) sink(members[*index - 1]);
}

ContextPtr bind_tuple(const ContextPtr& outer, const std::vector<VarId>& columns, const Tuple& t) {
  std::vector<std::pair<VarId, Sequence>> bindings;
  bindings.reserve(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) bindings.emplace_back(columns[i], t[i]);
  return DynamicContext::with_variables(outer, std::move(bindings));
}

namespace {

bool switch_match(const std::optional<Item>& a, const std::optional<Item>& b) {
  if (!a || !b) return !a && !b;
  try {
    auto cmp = three_way_compare(*a, *b);
    return cmp && *cmp == 0;
  } catch (const QueryError&) {
    return false;
  }
}

}  // namespace

Branch choose_branch(const PlanNode& n, const ContextPtr& ctx, const EvalChild& eval) {
  switch (n.kind) {
    case PlanKind::If:
      return {effective_boolean_value(eval(0, ctx)) ? std::size_t{1} : std::size_t{2}, ctx};
    case PlanKind::Switch: {
      auto operand = atomize_optional(eval(0, ctx), "switch operand");
      std::size_t at = 1;
      for (std::size_t values : n.case_sizes) {
        bool hit = false;
        for (std::size_t v = 0; v < values && !hit; ++v) {
          hit = switch_match(operand, atomize_optional(eval(at + v, ctx), "switch case"));
        }
        if (hit) return {at + values, ctx};
        at += values + 1;
      }
      return {at, ctx};
    }
    case PlanKind::Typeswitch: {
      Sequence operand = eval(0, ctx);
      std::size_t cases = n.case_types.size();
      for (std::size_t c = 0; c < cases; ++c) {
        for (const SequenceType& t : n.case_types[c]) {
          if (!instance_of(operand, t)) continue;
          VarId v = n.vars[c];
          return {c + 1, v == kNoVar ? ctx : DynamicContext::with_variable(ctx, v, operand)};
        }
      }
      VarId v = n.vars[cases];
      return {cases + 1, v == kNoVar ? ctx : DynamicContext::with_variable(ctx, v, operand)};
    }
    default:
      break;
  }
  throw QueryError(ErrorCode::UnsupportedFeature, "not a branching expression");
}

}  // namespace jsoniq::detail
