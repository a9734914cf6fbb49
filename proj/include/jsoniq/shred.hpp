#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "jsoniq/item.hpp"

namespace jsoniq {

enum class NullOrder { Before, After };

// Type tag of a shredded key. The declaration order is the group order.
// Empty-sequence keys and null keys have one slot before and one after all
// other types; the configured NullOrder picks which pair is used, and the
// empty key always sorts directly before null.
enum class TypeTag : std::uint8_t {
  EmptyBeforeAll,
  NullBeforeAll,
  Boolean,
  Number,
  String,
  EmptyAfterAll,
  NullAfterAll,
};

std::string_view type_tag_name(TypeTag tag);

// One atomic grouping key split into a numeric column, a string column and a
// tag recording the original type class. Numbers of every kind and booleans
// live in the numeric column (false = 0, true = 1); NaN is ordered after all
// other numbers.
struct ShreddedKey {
  std::optional<double> number;
  std::optional<std::string> text;
  TypeTag tag = TypeTag::EmptyBeforeAll;

  friend bool operator==(const ShreddedKey& a, const ShreddedKey& b);
  // Lexicographic (tag, number, text).
  friend int compare(const ShreddedKey& a, const ShreddedKey& b);
  friend bool operator<(const ShreddedKey& a, const ShreddedKey& b) {
    return compare(a, b) < 0;
  }

  std::size_t hash() const;
  std::string to_string() const;
};

// Throws MultiItemKeyError for sequences longer than one and
// NonatomicKeyError for objects/arrays.
ShreddedKey shred_group_key(const Sequence& seq, NullOrder null_order);

}  // namespace jsoniq
