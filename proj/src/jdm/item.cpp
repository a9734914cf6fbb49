#include "jsoniq/item.hpp"

#include <algorithm>
#include <cstring>

namespace jsoniq {

std::string_view item_type_name(ItemType type) {
  switch (type) {
    case ItemType::Null: return "null";
    case ItemType::Boolean: return "boolean";
    case ItemType::Integer: return "integer";
    case ItemType::Decimal: return "decimal";
    case ItemType::Double: return "double";
    case ItemType::String: return "string";
    case ItemType::Object: return "object";
    case ItemType::Array: return "array";
  }
  return "item";
}

Item Item::boolean(bool value) { return Item(Payload(std::in_place_index<1>, value)); }
Item Item::integer(std::int64_t value) {
  return Item(Payload(std::in_place_index<2>, Integer(value)));
}
Item Item::integer(Integer value) {
  return Item(Payload(std::in_place_index<2>, std::move(value)));
}
Item Item::decimal(Decimal value) {
  return Item(Payload(std::in_place_index<3>, std::move(value)));
}
Item Item::make_double(double value) {
  return Item(Payload(std::in_place_index<4>, value));
}
Item Item::string(std::string value) {
  return Item(Payload(std::in_place_index<5>, std::move(value)));
}
Item Item::object(std::vector<std::pair<std::string, Item>> members) {
  return Item(Payload(std::in_place_index<6>,
                      std::make_shared<const Object>(std::move(members))));
}
Item Item::array(std::vector<Item> members) {
  return Item(Payload(std::in_place_index<7>,
                      std::make_shared<const Array>(std::move(members))));
}

const Object& Item::as_object() const {
  return *std::get<std::shared_ptr<const Object>>(payload_);
}
const Array& Item::as_array() const {
  return *std::get<std::shared_ptr<const Array>>(payload_);
}

const Item* Item::member(std::string_view key) const {
  if (!is_object()) return nullptr;
  return as_object().find(key);
}

bool operator==(const Item& a, const Item& b) {
  if (a.type() != b.type()) return false;
  switch (a.type()) {
    case ItemType::Null: return true;
    case ItemType::Boolean: return a.as_boolean() == b.as_boolean();
    case ItemType::Integer: return a.as_integer() == b.as_integer();
    case ItemType::Decimal: return a.as_decimal() == b.as_decimal();
    case ItemType::Double: {
      double x = a.as_double(), y = b.as_double();
      // Bitwise so that NaN == NaN and -0.0 != 0.0 for round-trip checks.
      return std::memcmp(&x, &y, sizeof x) == 0;
    }
    case ItemType::String: return a.as_string() == b.as_string();
    case ItemType::Object: {
      const auto& x = a.as_object().members();
      const auto& y = b.as_object().members();
      return x == y;
    }
    case ItemType::Array:
      return a.as_array().members() == b.as_array().members();
  }
  return false;
}

const Item* Object::find(std::string_view key) const {
  for (const auto& [k, v] : members_) {
    if (k == key) return &v;
  }
  return nullptr;
}

Sequence::Sequence(std::vector<Item> items) {
  if (!items.empty()) {
    items_ = std::make_shared<const std::vector<Item>>(std::move(items));
  }
}

Sequence::Sequence(Item single)
    : items_(std::make_shared<const std::vector<Item>>(
          std::vector<Item>{std::move(single)})) {}

Sequence::Sequence(std::initializer_list<Item> items)
    : Sequence(std::vector<Item>(items)) {}

Sequence Sequence::concat(const Sequence& a, const Sequence& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<Item> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Sequence(std::move(out));
}

bool operator==(const Sequence& a, const Sequence& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace jsoniq
