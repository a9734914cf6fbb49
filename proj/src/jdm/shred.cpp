#include "jsoniq/shred.hpp"

#include <cmath>
#include <cstring>
#include <functional>

#include "jsoniq/atomic.hpp"
#include "jsoniq/errors.hpp"

namespace jsoniq {

namespace {

// 0.0 and -0.0 group together; all NaNs group together.
double canonical(double d) {
  if (std::isnan(d)) return std::numeric_limits<double>::quiet_NaN();
  if (d == 0.0) return 0.0;
  return d;
}

int compare_numbers(double a, double b) {
  bool an = std::isnan(a), bn = std::isnan(b);
  if (an || bn) return static_cast<int>(an) - static_cast<int>(bn);
  return a < b ? -1 : (a > b ? 1 : 0);
}

}  // namespace

std::string_view type_tag_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::EmptyBeforeAll: return "EmptyBeforeAll";
    case TypeTag::NullBeforeAll: return "NullBeforeAll";
    case TypeTag::Boolean: return "Boolean";
    case TypeTag::Number: return "Number";
    case TypeTag::String: return "String";
    case TypeTag::EmptyAfterAll: return "EmptyAfterAll";
    case TypeTag::NullAfterAll: return "NullAfterAll";
  }
  return "?";
}

bool operator==(const ShreddedKey& a, const ShreddedKey& b) {
  return compare(a, b) == 0;
}

int compare(const ShreddedKey& a, const ShreddedKey& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  if (a.number.has_value() != b.number.has_value()) return a.number ? 1 : -1;
  if (a.number) {
    int c = compare_numbers(*a.number, *b.number);
    if (c != 0) return c;
  }
  if (a.text.has_value() != b.text.has_value()) return a.text ? 1 : -1;
  if (a.text) {
    int c = a.text->compare(*b.text);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return 0;
}

std::size_t ShreddedKey::hash() const {
  std::size_t h = static_cast<std::size_t>(tag) * 0x9e3779b97f4a7c15ULL;
  if (number) {
    double d = canonical(*number);
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    h ^= std::hash<std::uint64_t>{}(bits) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  if (text) {
    h ^= std::hash<std::string>{}(*text) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string ShreddedKey::to_string() const {
  std::string out = "(";
  out += number ? double_to_string(*number) : "absent";
  out += ", ";
  out += text ? "\"" + *text + "\"" : "absent";
  out += ", ";
  out += type_tag_name(tag);
  out += ")";
  return out;
}

ShreddedKey shred_group_key(const Sequence& seq, NullOrder null_order) {
  ShreddedKey key;
  if (seq.empty()) {
    key.tag = null_order == NullOrder::Before ? TypeTag::EmptyBeforeAll
                                              : TypeTag::EmptyAfterAll;
    return key;
  }
  if (seq.size() > 1) {
    throw_error(ErrorCode::MultiItemKeyError,
                "grouping key must be at most one item, got " +
                    std::to_string(seq.size()));
  }
  const Item& item = seq.front();
  switch (item.type()) {
    case ItemType::Null:
      key.tag = null_order == NullOrder::Before ? TypeTag::NullBeforeAll
                                                : TypeTag::NullAfterAll;
      break;
    case ItemType::Boolean:
      key.tag = TypeTag::Boolean;
      key.number = item.as_boolean() ? 1.0 : 0.0;
      break;
    case ItemType::Integer:
    case ItemType::Decimal:
    case ItemType::Double:
      key.tag = TypeTag::Number;
      key.number = canonical(numeric_to_double(item));
      break;
    case ItemType::String:
      key.tag = TypeTag::String;
      key.text = item.as_string();
      break;
    case ItemType::Object:
    case ItemType::Array:
      throw_error(ErrorCode::NonatomicKeyError,
                  "grouping key must be atomic, got " +
                      std::string(item_type_name(item.type())));
  }
  return key;
}

}  // namespace jsoniq
