#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "jsoniq/decimal.hpp"

namespace jsoniq {

enum class ItemType : std::uint8_t {
  Null,
  Boolean,
  Integer,
  Decimal,
  Double,
  String,
  Object,
  Array,
};

std::string_view item_type_name(ItemType type);

class Item;
class Object;
class Array;

// An immutable JSONiq item. Objects and arrays are shared, so copies are
// cheap and safe to hand to other threads.
class Item {
 public:
  Item() = default;  // null

  static Item null() { return Item(); }
  static Item boolean(bool value);
  static Item integer(std::int64_t value);
  static Item integer(Integer value);
  static Item decimal(Decimal value);
  static Item make_double(double value);
  static Item string(std::string value);
  // Keys must be unique; callers that accept untrusted input check first.
  static Item object(std::vector<std::pair<std::string, Item>> members);
  static Item array(std::vector<Item> members);

  ItemType type() const { return static_cast<ItemType>(payload_.index()); }
  bool is_null() const { return type() == ItemType::Null; }
  bool is_boolean() const { return type() == ItemType::Boolean; }
  bool is_integer() const { return type() == ItemType::Integer; }
  bool is_decimal() const { return type() == ItemType::Decimal; }
  bool is_double() const { return type() == ItemType::Double; }
  bool is_string() const { return type() == ItemType::String; }
  bool is_object() const { return type() == ItemType::Object; }
  bool is_array() const { return type() == ItemType::Array; }
  bool is_numeric() const {
    auto t = type();
    return t == ItemType::Integer || t == ItemType::Decimal ||
           t == ItemType::Double;
  }
  bool is_atomic() const { return !is_object() && !is_array(); }

  bool as_boolean() const { return std::get<bool>(payload_); }
  const Integer& as_integer() const { return std::get<Integer>(payload_); }
  const Decimal& as_decimal() const { return std::get<Decimal>(payload_); }
  double as_double() const { return std::get<double>(payload_); }
  const std::string& as_string() const { return std::get<std::string>(payload_); }
  const Object& as_object() const;
  const Array& as_array() const;

  // Member value, or nullptr when this is not an object or lacks the key.
  const Item* member(std::string_view key) const;

  // Exact structural equality: types must match (1 and 1.0 differ).
  friend bool operator==(const Item& a, const Item& b);

 private:
  using Payload =
      std::variant<std::monostate, bool, Integer, Decimal, double, std::string,
                   std::shared_ptr<const Object>, std::shared_ptr<const Array>>;
  explicit Item(Payload payload) : payload_(std::move(payload)) {}

  Payload payload_;
};

class Object {
 public:
  using Member = std::pair<std::string, Item>;

  explicit Object(std::vector<Member> members) : members_(std::move(members)) {}

  const std::vector<Member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Item* find(std::string_view key) const;

 private:
  std::vector<Member> members_;  // insertion order
};

class Array {
 public:
  explicit Array(std::vector<Item> members) : members_(std::move(members)) {}

  const std::vector<Item>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<Item> members_;
};

// Flat, immutable, ordered sequence of items. Copies share storage.
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(std::vector<Item> items);
  Sequence(Item single);  // NOLINT: a single item is a sequence
  Sequence(std::initializer_list<Item> items);

  std::size_t size() const { return items_ ? items_->size() : 0; }
  bool empty() const { return size() == 0; }
  const Item& operator[](std::size_t i) const { return (*items_)[i]; }
  const Item& front() const { return items_->front(); }
  std::span<const Item> items() const {
    return items_ ? std::span<const Item>(*items_) : std::span<const Item>();
  }
  auto begin() const { return items().begin(); }
  auto end() const { return items().end(); }

  static Sequence concat(const Sequence& a, const Sequence& b);

  friend bool operator==(const Sequence& a, const Sequence& b);

 private:
  std::shared_ptr<const std::vector<Item>> items_;
};

}  // namespace jsoniq
