#include "jsoniq/atomic.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace jsoniq {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\n\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void incomparable(const Item& a, const Item& b) {
  throw_error(ErrorCode::TypeError,
              "cannot compare " + std::string(item_type_name(a.type())) +
                  " with " + std::string(item_type_name(b.type())));
}

Decimal to_decimal(const Item& v) {
  if (v.is_integer()) return Decimal::from_integer(v.as_integer());
  return v.as_decimal();
}

std::optional<int> compare_numeric(const Item& a, const Item& b) {
  if (a.is_double() || b.is_double()) {
    if (a.is_double() && b.is_double()) {
      double x = a.as_double(), y = b.as_double();
      if (std::isnan(x) || std::isnan(y)) return std::nullopt;
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    // Exactly one side is a double; compare it against the exact side.
    const Item& exact = a.is_double() ? b : a;
    double d = a.is_double() ? a.as_double() : b.as_double();
    if (std::isnan(d)) return std::nullopt;
    int exact_vs_d;
    if (std::isinf(d)) {
      exact_vs_d = d > 0 ? -1 : 1;
    } else {
      Decimal x = to_decimal(exact);
      auto c = compare_exact(x.unscaled(), x.scale(), d);
      exact_vs_d = c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    return a.is_double() ? -exact_vs_d : exact_vs_d;
  }
  if (a.is_integer() && b.is_integer()) {
    int c = a.as_integer().compare(b.as_integer());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  auto c = to_decimal(a) <=> to_decimal(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool valid_double_lexical(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

[[noreturn]] void cast_failure(const Item& item, AtomicType target) {
  std::string shown = item.is_string() ? "\"" + item.as_string() + "\""
                                       : string_value(item);
  throw_error(ErrorCode::CastError, "cannot cast " + shown + " (" +
                                        std::string(item_type_name(item.type())) +
                                        ") to " +
                                        std::string(atomic_type_name(target)));
}

}  // namespace

bool effective_boolean_value(const Sequence& seq) {
  if (seq.empty()) return false;
  const Item& first = seq.front();
  if (!first.is_atomic()) return true;
  if (seq.size() > 1) {
    throw_error(ErrorCode::EbvError,
                "effective boolean value is not defined for a sequence of " +
                    std::to_string(seq.size()) + " items starting with an atomic");
  }
  switch (first.type()) {
    case ItemType::Boolean: return first.as_boolean();
    case ItemType::String: return !first.as_string().empty();
    case ItemType::Integer: return !first.as_integer().is_zero();
    case ItemType::Decimal: return !first.as_decimal().is_zero();
    case ItemType::Double: {
      double d = first.as_double();
      return d != 0.0 && !std::isnan(d);
    }
    case ItemType::Null: return false;
    default: return true;
  }
}

std::string_view compare_op_name(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "eq";
    case CompareOp::Ne: return "ne";
    case CompareOp::Lt: return "lt";
    case CompareOp::Le: return "le";
    case CompareOp::Gt: return "gt";
    case CompareOp::Ge: return "ge";
  }
  return "?";
}

std::optional<int> three_way_compare(const Item& a, const Item& b) {
  if (!a.is_atomic() || !b.is_atomic()) incomparable(a, b);
  if (a.is_null() || b.is_null()) {
    if (a.is_null() && b.is_null()) return 0;
    return a.is_null() ? -1 : 1;
  }
  if (a.is_numeric() && b.is_numeric()) return compare_numeric(a, b);
  if (a.is_string() && b.is_string()) {
    // UTF-8 byte order equals codepoint order.
    int c = a.as_string().compare(b.as_string());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (a.is_boolean() && b.is_boolean()) {
    return static_cast<int>(a.as_boolean()) - static_cast<int>(b.as_boolean());
  }
  incomparable(a, b);
}

bool compare_atomics(const Item& a, const Item& b, CompareOp op) {
  auto c = three_way_compare(a, b);
  if (!c) return op == CompareOp::Ne;
  switch (op) {
    case CompareOp::Eq: return *c == 0;
    case CompareOp::Ne: return *c != 0;
    case CompareOp::Lt: return *c < 0;
    case CompareOp::Le: return *c <= 0;
    case CompareOp::Gt: return *c > 0;
    case CompareOp::Ge: return *c >= 0;
  }
  return false;
}

std::string_view arith_op_name(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "div";
    case ArithOp::IDiv: return "idiv";
    case ArithOp::Mod: return "mod";
  }
  return "?";
}

double numeric_to_double(const Item& item) {
  switch (item.type()) {
    case ItemType::Integer: return integer_to_double(item.as_integer());
    case ItemType::Decimal: return item.as_decimal().to_double();
    case ItemType::Double: return item.as_double();
    default:
      throw_error(ErrorCode::TypeError,
                  std::string(item_type_name(item.type())) + " is not a number");
  }
}

Item arith_items(ArithOp op, const Item& a, const Item& b) {
  if (!a.is_numeric() || !b.is_numeric()) {
    throw_error(ErrorCode::TypeError,
                "operator " + std::string(arith_op_name(op)) +
                    " is not defined for " + std::string(item_type_name(a.type())) +
                    " and " + std::string(item_type_name(b.type())));
  }
  if (a.is_double() || b.is_double()) {
    double x = numeric_to_double(a), y = numeric_to_double(b);
    switch (op) {
      case ArithOp::Add: return Item::make_double(x + y);
      case ArithOp::Sub: return Item::make_double(x - y);
      case ArithOp::Mul: return Item::make_double(x * y);
      case ArithOp::Div: return Item::make_double(x / y);
      case ArithOp::Mod: return Item::make_double(std::fmod(x, y));
      case ArithOp::IDiv: {
        if (y == 0.0) throw_error(ErrorCode::DivByZero, "integer division by zero");
        double q = std::trunc(x / y);
        auto d = Decimal::from_double(q);
        if (!d) {
          throw_error(ErrorCode::TypeError, "idiv result is not a finite number");
        }
        return Item::integer(d->truncate());
      }
    }
  }
  if (a.is_integer() && b.is_integer()) {
    const Integer& x = a.as_integer();
    const Integer& y = b.as_integer();
    switch (op) {
      case ArithOp::Add: return Item::integer(Integer(x + y));
      case ArithOp::Sub: return Item::integer(Integer(x - y));
      case ArithOp::Mul: return Item::integer(Integer(x * y));
      case ArithOp::Div:
        if (y.is_zero()) throw_error(ErrorCode::DivByZero, "division by zero");
        return Item::decimal(
            Decimal::divide(Decimal::from_integer(x), Decimal::from_integer(y)));
      case ArithOp::IDiv:
        if (y.is_zero()) throw_error(ErrorCode::DivByZero, "integer division by zero");
        return Item::integer(Integer(x / y));
      case ArithOp::Mod:
        if (y.is_zero()) throw_error(ErrorCode::DivByZero, "modulo by zero");
        return Item::integer(Integer(x % y));
    }
  }
  Decimal x = to_decimal(a), y = to_decimal(b);
  switch (op) {
    case ArithOp::Add: return Item::decimal(x + y);
    case ArithOp::Sub: return Item::decimal(x - y);
    case ArithOp::Mul: return Item::decimal(x * y);
    case ArithOp::Div:
      if (y.is_zero()) throw_error(ErrorCode::DivByZero, "division by zero");
      return Item::decimal(Decimal::divide(x, y));
    case ArithOp::IDiv: {
      if (y.is_zero()) throw_error(ErrorCode::DivByZero, "integer division by zero");
      int scale = std::max(x.scale(), y.scale());
      Integer lhs = x.unscaled() * pow10(scale - x.scale());
      Integer rhs = y.unscaled() * pow10(scale - y.scale());
      return Item::integer(Integer(lhs / rhs));
    }
    case ArithOp::Mod:
      if (y.is_zero()) throw_error(ErrorCode::DivByZero, "modulo by zero");
      return Item::decimal(Decimal::remainder(x, y));
  }
  return Item();
}

std::optional<Item> atomize_optional(const Sequence& seq, std::string_view what) {
  if (seq.empty()) return std::nullopt;
  if (seq.size() > 1) {
    throw_error(ErrorCode::TypeError,
                std::string(what) + " expects at most one item, got " +
                    std::to_string(seq.size()));
  }
  if (!seq.front().is_atomic()) {
    throw_error(ErrorCode::TypeError,
                std::string(what) + " expects an atomic value, got " +
                    std::string(item_type_name(seq.front().type())));
  }
  return seq.front();
}

Sequence arith(ArithOp op, const Sequence& a, const Sequence& b) {
  auto x = atomize_optional(a, "arithmetic");
  auto y = atomize_optional(b, "arithmetic");
  if (!x || !y) return {};
  return Sequence(arith_items(op, *x, *y));
}

Item negate(const Item& value) {
  switch (value.type()) {
    case ItemType::Integer: return Item::integer(Integer(-value.as_integer()));
    case ItemType::Decimal: return Item::decimal(-value.as_decimal());
    case ItemType::Double: return Item::make_double(-value.as_double());
    default:
      throw_error(ErrorCode::TypeError, "unary minus is not defined for " +
                                            std::string(item_type_name(value.type())));
  }
}

std::optional<AtomicType> atomic_type_from_name(std::string_view name) {
  if (name == "string") return AtomicType::String;
  if (name == "integer") return AtomicType::Integer;
  if (name == "decimal") return AtomicType::Decimal;
  if (name == "double") return AtomicType::Double;
  if (name == "boolean") return AtomicType::Boolean;
  if (name == "null") return AtomicType::Null;
  return std::nullopt;
}

std::string_view atomic_type_name(AtomicType type) {
  switch (type) {
    case AtomicType::String: return "string";
    case AtomicType::Integer: return "integer";
    case AtomicType::Decimal: return "decimal";
    case AtomicType::Double: return "double";
    case AtomicType::Boolean: return "boolean";
    case AtomicType::Null: return "null";
  }
  return "?";
}

std::string double_to_string(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "INF" : "-INF";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value,
                           std::chars_format::scientific);
  std::string_view text(buf, res.ptr - buf);
  auto e = text.find('e');
  std::string out(text.substr(0, e));
  if (out.find('.') == std::string::npos) out += ".0";
  out += 'E';
  std::string_view exp = text.substr(e + 1);
  if (exp[0] == '-') {
    out += '-';
  }
  exp.remove_prefix(1);
  while (exp.size() > 1 && exp[0] == '0') exp.remove_prefix(1);
  out += exp;
  return out;
}

std::string string_value(const Item& atomic) {
  switch (atomic.type()) {
    case ItemType::String: return atomic.as_string();
    case ItemType::Integer: return integer_to_string(atomic.as_integer());
    case ItemType::Decimal: return atomic.as_decimal().to_string();
    case ItemType::Double: return double_to_string(atomic.as_double());
    case ItemType::Boolean: return atomic.as_boolean() ? "true" : "false";
    case ItemType::Null: return "null";
    default:
      throw_error(ErrorCode::TypeError, "no string value for " +
                                            std::string(item_type_name(atomic.type())));
  }
}

Item cast_item(const Item& item, AtomicType target) {
  if (!item.is_atomic()) {
    throw_error(ErrorCode::TypeError, "cannot cast " +
                                          std::string(item_type_name(item.type())) +
                                          " to " + std::string(atomic_type_name(target)));
  }
  switch (target) {
    case AtomicType::String:
      return Item::string(string_value(item));
    case AtomicType::Integer:
      switch (item.type()) {
        case ItemType::Integer: return item;
        case ItemType::Decimal: return Item::integer(item.as_decimal().truncate());
        case ItemType::Double: {
          auto d = Decimal::from_double(std::trunc(item.as_double()));
          if (!d) cast_failure(item, target);
          return Item::integer(d->truncate());
        }
        case ItemType::Boolean: return Item::integer(item.as_boolean() ? 1 : 0);
        case ItemType::String: {
          auto v = parse_integer(trim(item.as_string()));
          if (!v) cast_failure(item, target);
          return Item::integer(std::move(*v));
        }
        default: cast_failure(item, target);
      }
    case AtomicType::Decimal:
      switch (item.type()) {
        case ItemType::Integer: return Item::decimal(Decimal::from_integer(item.as_integer()));
        case ItemType::Decimal: return item;
        case ItemType::Double: {
          auto d = Decimal::from_double(item.as_double());
          if (!d) cast_failure(item, target);
          return Item::decimal(std::move(*d));
        }
        case ItemType::Boolean:
          return Item::decimal(Decimal::from_integer(item.as_boolean() ? 1 : 0));
        case ItemType::String: {
          auto v = Decimal::parse(trim(item.as_string()));
          if (!v) cast_failure(item, target);
          return Item::decimal(std::move(*v));
        }
        default: cast_failure(item, target);
      }
    case AtomicType::Double:
      switch (item.type()) {
        case ItemType::Integer:
        case ItemType::Decimal:
        case ItemType::Double:
          return Item::make_double(numeric_to_double(item));
        case ItemType::Boolean: return Item::make_double(item.as_boolean() ? 1.0 : 0.0);
        case ItemType::String: {
          std::string_view s = trim(item.as_string());
          if (s == "INF" || s == "+INF") return Item::make_double(HUGE_VAL);
          if (s == "-INF") return Item::make_double(-HUGE_VAL);
          if (s == "NaN") return Item::make_double(std::nan(""));
          if (!valid_double_lexical(s)) cast_failure(item, target);
          return Item::make_double(std::strtod(std::string(s).c_str(), nullptr));
        }
        default: cast_failure(item, target);
      }
    case AtomicType::Boolean:
      switch (item.type()) {
        case ItemType::Boolean: return item;
        case ItemType::Integer:
        case ItemType::Decimal:
        case ItemType::Double: return Item::boolean(effective_boolean_value(Sequence(item)));
        case ItemType::String: {
          std::string_view s = trim(item.as_string());
          if (s == "true" || s == "1") return Item::boolean(true);
          if (s == "false" || s == "0") return Item::boolean(false);
          cast_failure(item, target);
        }
        default: cast_failure(item, target);
      }
    case AtomicType::Null:
      if (item.is_null()) return item;
      if (item.is_string() && trim(item.as_string()) == "null") return Item::null();
      cast_failure(item, target);
  }
  cast_failure(item, target);
}

bool castable(const Item& item, AtomicType target) {
  try {
    cast_item(item, target);
    return true;
  } catch (const QueryError&) {
    return false;
  }
}

std::optional<ItemTest> item_test_from_name(std::string_view name) {
  if (name == "item") return ItemTest::Item;
  if (name == "atomic") return ItemTest::Atomic;
  if (name == "json-item") return ItemTest::JsonItem;
  if (name == "object") return ItemTest::Object;
  if (name == "array") return ItemTest::Array;
  if (name == "string") return ItemTest::String;
  if (name == "integer") return ItemTest::Integer;
  if (name == "decimal") return ItemTest::Decimal;
  if (name == "double") return ItemTest::Double;
  if (name == "boolean") return ItemTest::Boolean;
  if (name == "null") return ItemTest::Null;
  if (name == "empty-sequence") return ItemTest::Empty;
  return std::nullopt;
}

bool matches_item_test(const Item& item, ItemTest test) {
  switch (test) {
    case ItemTest::Item: return true;
    case ItemTest::Atomic: return item.is_atomic();
    case ItemTest::JsonItem: return !item.is_atomic();
    case ItemTest::Object: return item.is_object();
    case ItemTest::Array: return item.is_array();
    case ItemTest::String: return item.is_string();
    case ItemTest::Integer: return item.is_integer();
    case ItemTest::Decimal: return item.is_integer() || item.is_decimal();
    case ItemTest::Double: return item.is_double();
    case ItemTest::Boolean: return item.is_boolean();
    case ItemTest::Null: return item.is_null();
    case ItemTest::Empty: return false;
  }
  return false;
}

bool instance_of(const Sequence& seq, const SequenceType& type) {
  if (type.test == ItemTest::Empty) return seq.empty();
  const std::size_t n = seq.size();
  switch (type.occurrence) {
    case Occurrence::One: if (n != 1) return false; break;
    case Occurrence::Optional: if (n > 1) return false; break;
    case Occurrence::Plus: if (n == 0) return false; break;
    case Occurrence::Star: break;
  }
  for (const Item& item : seq) {
    if (!matches_item_test(item, type.test)) return false;
  }
  return true;
}

std::string SequenceType::to_string() const {
  std::string out;
  switch (test) {
    case ItemTest::Item: out = "item"; break;
    case ItemTest::Atomic: out = "atomic"; break;
    case ItemTest::JsonItem: out = "json-item"; break;
    case ItemTest::Object: out = "object"; break;
    case ItemTest::Array: out = "array"; break;
    case ItemTest::String: out = "string"; break;
    case ItemTest::Integer: out = "integer"; break;
    case ItemTest::Decimal: out = "decimal"; break;
    case ItemTest::Double: out = "double"; break;
    case ItemTest::Boolean: out = "boolean"; break;
    case ItemTest::Null: out = "null"; break;
    case ItemTest::Empty: return "empty-sequence()";
  }
  switch (occurrence) {
    case Occurrence::One: break;
    case Occurrence::Optional: out += '?'; break;
    case Occurrence::Star: out += '*'; break;
    case Occurrence::Plus: out += '+'; break;
  }
  return out;
}

}  // namespace jsoniq
