#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jsoniq/errors.hpp"
#include "jsoniq/item.hpp"

namespace jsoniq {

// Effective boolean value. Throws EbvError for multi-item sequences whose
// first item is atomic.
bool effective_boolean_value(const Sequence& seq);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view compare_op_name(CompareOp op);

// Value comparison of two atomics. Numbers compare exactly across
// integer/decimal/double; strings by codepoint; null is equal only to null
// and less than every other value. Throws TypeError otherwise.
bool compare_atomics(const Item& a, const Item& b, CompareOp op);

// Three-way comparison used by compare_atomics; nullopt when unordered
// (NaN involved). Throws TypeError for incomparable types.
std::optional<int> three_way_compare(const Item& a, const Item& b);

enum class ArithOp { Add, Sub, Mul, Div, IDiv, Mod };

std::string_view arith_op_name(ArithOp op);

// Operands are sequences of length <= 1. Empty operand yields empty result.
Sequence arith(ArithOp op, const Sequence& a, const Sequence& b);
Item arith_items(ArithOp op, const Item& a, const Item& b);
Item negate(const Item& value);

// Atomic type names usable in cast/castable and sequence types.
enum class AtomicType { String, Integer, Decimal, Double, Boolean, Null };

std::optional<AtomicType> atomic_type_from_name(std::string_view name);
std::string_view atomic_type_name(AtomicType type);

// Throws CastError when the value cannot be converted, TypeError when the
// input is not atomic.
Item cast_item(const Item& item, AtomicType target);
bool castable(const Item& item, AtomicType target);

// Lexical form used by cast-to-string and string(): strings verbatim,
// numbers in canonical form, null as "null".
std::string string_value(const Item& atomic);

// Canonical double text: shortest round-trip digits with an exponent,
// e.g. "1.0E2", "1.5E-3"; "NaN", "INF", "-INF" for non-finite values.
std::string double_to_string(double value);

enum class ItemTest {
  Item,
  Atomic,
  JsonItem,
  Object,
  Array,
  String,
  Integer,
  Decimal,
  Double,
  Boolean,
  Null,
  Empty,  // empty-sequence()
};

enum class Occurrence { One, Optional, Star, Plus };

struct SequenceType {
  ItemTest test = ItemTest::Item;
  Occurrence occurrence = Occurrence::One;

  std::string to_string() const;
  friend bool operator==(const SequenceType&, const SequenceType&) = default;
};

std::optional<ItemTest> item_test_from_name(std::string_view name);
bool matches_item_test(const Item& item, ItemTest test);
bool instance_of(const Sequence& seq, const SequenceType& type);

// Numeric value as double (booleans are not numbers here).
double numeric_to_double(const Item& item);

// Single-item atomization used by operators: nullopt for empty, throws
// TypeError for more than one item or for objects/arrays.
std::optional<Item> atomize_optional(const Sequence& seq, std::string_view what);

}  // namespace jsoniq
