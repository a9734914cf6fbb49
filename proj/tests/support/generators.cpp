#include "support/generators.hpp"

#include <cmath>

#include "jsoniq/decimal.hpp"

namespace testgen {

using jsoniq::Item;

std::string random_digits(Rng& rng, int digits, bool allow_negative) {
  std::string s;
  if (allow_negative && rng.chance(0.4)) s += '-';
  int n = static_cast<int>(rng.range(1, digits));
  s += static_cast<char>('1' + rng.range(0, 8));
  for (int i = 1; i < n; ++i) s += static_cast<char>('0' + rng.range(0, 9));
  if (rng.chance(0.05)) return allow_negative && s[0] == '-' ? "-0" : "0";
  return s;
}

std::string random_string(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {
      "a", "b", "z", "A", " ", "0", "9", "\"", "\\", "/", "\n", "\t",
      "\x01", "\xc3\xa9", "\xe2\x82\xac", "\xf0\x9f\x98\x80", "-", "_"};
  std::string s;
  std::size_t n = rng.index(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) s += rng.pick(pieces);
  return s;
}

Item random_atomic(Rng& rng) {
  switch (rng.range(0, 6)) {
    case 0:
      return Item::null();
    case 1:
      return Item::boolean(rng.chance(0.5));
    case 2:
      return Item::integer(*jsoniq::parse_integer(random_digits(rng, 30)));
    case 3: {
      std::string text = random_digits(rng, 20) + "." +
                         random_digits(rng, 20, false);
      return Item::decimal(*jsoniq::Decimal::parse(text));
    }
    case 4: {
      double mant = rng.real(-1.0, 1.0);
      int exp = static_cast<int>(rng.range(-300, 300));
      return Item::make_double(std::ldexp(mant, exp));
    }
    case 5:
      return Item::make_double(static_cast<double>(rng.range(-1000, 1000)) / 8);
    default:
      return Item::string(random_string(rng, 12));
  }
}

Item random_item(Rng& rng, int depth) {
  if (depth <= 0 || rng.chance(0.5)) return random_atomic(rng);
  if (rng.chance(0.5)) {
    std::vector<Item> members;
    std::size_t n = rng.index(5);
    for (std::size_t i = 0; i < n; ++i) members.push_back(random_item(rng, depth - 1));
    return Item::array(std::move(members));
  }
  std::vector<std::pair<std::string, Item>> members;
  std::size_t n = rng.index(5);
  for (std::size_t i = 0; i < n; ++i) {
    std::string key = random_string(rng, 6) + "#" + std::to_string(i);
    members.emplace_back(std::move(key), random_item(rng, depth - 1));
  }
  return Item::object(std::move(members));
}

std::string random_query_noise(Rng& rng, std::size_t tokens) {
  static const std::vector<std::string> vocab = {
      "for", "let", "$x", "$y", "in", ":=", "return", "where", "group", "by",
      "order", "count", "$c", "1", "2.5", "3e2", "\"s\"", "(", ")", "[", "]",
      "[[", "]]", "{", "}", ",", ":", ".", "!", "+", "-", "*", "div", "eq",
      "=", "<", "and", "or", "not", "to", "||", "if", "then", "else", "$$",
      "some", "satisfies", "try", "catch", "cast", "as", "integer", "?",
      "instance", "of", "typeswitch", "case", "default", "switch", "(:", ":)",
      "json-file", "sum", "\"", "\\", "@", "#", "\n", "stable", "empty",
      "greatest", "ascending", "descending", "at", "treat", "castable", "|"};
  std::string s;
  for (std::size_t i = 0; i < tokens; ++i) {
    if (rng.chance(0.03)) {
      s += static_cast<char>(rng.range(0, 255));
    } else {
      s += rng.pick(vocab);
    }
    if (rng.chance(0.7)) s += ' ';
  }
  return s;
}

}  // namespace testgen
