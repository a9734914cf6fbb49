#include "jsoniq/json.hpp"

#include <charconv>
#include <cstdlib>
#include <unordered_set>

#include "jsoniq/atomic.hpp"
#include "jsoniq/errors.hpp"

namespace jsoniq {

namespace {

constexpr int kMaxDepth = 512;

class JsonParser {
 public:
  explicit JsonParser(std::string_view text) : text_(text) {}

  Item parse_document() {
    skip_ws();
    Item value = parse_value(0);
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw_error(ErrorCode::JsonParseError,
                what + " at byte " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
      ++pos_;
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void expect_literal(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) fail("invalid literal");
    pos_ += word.size();
  }

  Item parse_value(int depth) {
    if (depth > kMaxDepth) fail("nesting too deep");
    if (at_end()) fail("unexpected end of input");
    switch (peek()) {
      case '{': return parse_object(depth);
      case '[': return parse_array(depth);
      case '"': return Item::string(parse_string());
      case 't': expect_literal("true"); return Item::boolean(true);
      case 'f': expect_literal("false"); return Item::boolean(false);
      case 'n': expect_literal("null"); return Item::null();
      default:
        if (peek() == '-' || (peek() >= '0' && peek() <= '9')) return parse_number();
        fail(std::string("unexpected character '") + peek() + "'");
    }
  }

  Item parse_object(int depth) {
    ++pos_;  // '{'
    std::vector<std::pair<std::string, Item>> members;
    skip_ws();
    if (!at_end() && peek() == '}') {
      ++pos_;
      return Item::object(std::move(members));
    }
    while (true) {
      skip_ws();
      if (at_end() || peek() != '"') fail("expected object key");
      std::string key = parse_string();
      skip_ws();
      if (at_end() || peek() != ':') fail("expected ':'");
      ++pos_;
      skip_ws();
      Item value = parse_value(depth + 1);
      members.emplace_back(std::move(key), std::move(value));
      skip_ws();
      if (at_end()) fail("unterminated object");
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        break;
      }
      fail("expected ',' or '}'");
    }
    check_unique(members);
    return Item::object(std::move(members));
  }

  void check_unique(const std::vector<std::pair<std::string, Item>>& members) {
    if (members.size() <= 16) {
      for (std::size_t i = 1; i < members.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (members[i].first == members[j].first) {
            fail("duplicate key \"" + members[i].first + "\"");
          }
        }
      }
      return;
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& m : members) {
      if (!seen.insert(m.first).second) fail("duplicate key \"" + m.first + "\"");
    }
  }

  Item parse_array(int depth) {
    ++pos_;  // '['
    std::vector<Item> members;
    skip_ws();
    if (!at_end() && peek() == ']') {
      ++pos_;
      return Item::array(std::move(members));
    }
    while (true) {
      skip_ws();
      members.push_back(parse_value(depth + 1));
      skip_ws();
      if (at_end()) fail("unterminated array");
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']'");
    }
    return Item::array(std::move(members));
  }

  Item parse_number() {
    const std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    if (at_end()) fail("invalid number");
    if (peek() == '0') {
      ++pos_;
    } else if (peek() >= '1' && peek() <= '9') {
      while (!at_end() && peek() >= '0' && peek() <= '9') ++pos_;
    } else {
      fail("invalid number");
    }
    bool fraction = false, exponent = false;
    if (!at_end() && peek() == '.') {
      fraction = true;
      ++pos_;
      std::size_t digits = pos_;
      while (!at_end() && peek() >= '0' && peek() <= '9') ++pos_;
      if (pos_ == digits) fail("invalid number");
    }
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      exponent = true;
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      std::size_t digits = pos_;
      while (!at_end() && peek() >= '0' && peek() <= '9') ++pos_;
      if (pos_ == digits) fail("invalid number");
    }
    std::string_view token = text_.substr(start, pos_ - start);
    if (exponent) {
      double d = 0;
      auto res = std::from_chars(token.data(), token.data() + token.size(), d);
      if (res.ec == std::errc::result_out_of_range) {
        d = std::strtod(std::string(token).c_str(), nullptr);
      }
      return Item::make_double(d);
    }
    if (fraction) return Item::decimal(*Decimal::parse(token));
    return Item::integer(*parse_integer(token));
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::uint32_t parse_hex4() {
    if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      char c = text_[pos_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= c - '0';
      else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
      else fail("invalid \\u escape");
    }
    return v;
  }

  // Validates one UTF-8 sequence starting at pos_ and copies it.
  void copy_utf8(std::string& out) {
    auto b0 = static_cast<unsigned char>(text_[pos_]);
    int len;
    std::uint32_t min;
    if ((b0 & 0xE0) == 0xC0) len = 2, min = 0x80;
    else if ((b0 & 0xF0) == 0xE0) len = 3, min = 0x800;
    else if ((b0 & 0xF8) == 0xF0) len = 4, min = 0x10000;
    else fail("invalid UTF-8");
    if (pos_ + len > text_.size()) fail("invalid UTF-8");
    std::uint32_t cp = b0 & (0x7F >> len);
    for (int i = 1; i < len; ++i) {
      auto b = static_cast<unsigned char>(text_[pos_ + i]);
      if ((b & 0xC0) != 0x80) fail("invalid UTF-8");
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      fail("invalid UTF-8");
    }
    out.append(text_.substr(pos_, len));
    pos_ += len;
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      // Copy the plain ASCII run in one go.
      std::size_t run = pos_;
      while (run < text_.size()) {
        auto c = static_cast<unsigned char>(text_[run]);
        if (c == '"' || c == '\\' || c < 0x20 || c >= 0x80) break;
        ++run;
      }
      out.append(text_.substr(pos_, run - pos_));
      pos_ = run;
      if (at_end()) fail("unterminated string");
      auto c = static_cast<unsigned char>(peek());
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c < 0x20) fail("control character in string");
      if (c >= 0x80) {
        copy_utf8(out);
        continue;
      }
      ++pos_;  // backslash
      if (at_end()) fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case '/': out.push_back('/'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u': {
          std::uint32_t cp = parse_hex4();
          if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (text_.substr(pos_, 2) != "\\u") fail("unpaired surrogate");
            pos_ += 2;
            std::uint32_t low = parse_hex4();
            if (low < 0xDC00 || low > 0xDFFF) fail("unpaired surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
          } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            fail("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default: fail("invalid escape");
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void append_number(std::string& out, const Item& item) {
  switch (item.type()) {
    case ItemType::Integer: out += integer_to_string(item.as_integer()); break;
    case ItemType::Decimal: out += item.as_decimal().to_string(); break;
    case ItemType::Double: out += double_to_string(item.as_double()); break;
    default: break;
  }
}

void append_pretty(std::string& out, const Item& item, int indent) {
  auto newline = [&](int level) {
    out.push_back('\n');
    out.append(static_cast<std::size_t>(level) * 2, ' ');
  };
  if (item.is_object()) {
    const auto& members = item.as_object().members();
    if (members.empty()) {
      out += "{}";
      return;
    }
    out.push_back('{');
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) out.push_back(',');
      newline(indent + 1);
      append_json_string(out, members[i].first);
      out += ": ";
      append_pretty(out, members[i].second, indent + 1);
    }
    newline(indent);
    out.push_back('}');
  } else if (item.is_array()) {
    const auto& members = item.as_array().members();
    if (members.empty()) {
      out += "[]";
      return;
    }
    out.push_back('[');
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) out.push_back(',');
      newline(indent + 1);
      append_pretty(out, members[i], indent + 1);
    }
    newline(indent);
    out.push_back(']');
  } else {
    append_json(out, item);
  }
}

}  // namespace

Item parse_json_line(std::string_view text) {
  return JsonParser(text).parse_document();
}

void append_json_string(std::string& out, std::string_view text) {
  static constexpr char kHex[] = "0123456789abcdef";
  out.push_back('"');
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0xF]);
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

void append_json(std::string& out, const Item& item) {
  switch (item.type()) {
    case ItemType::Null: out += "null"; break;
    case ItemType::Boolean: out += item.as_boolean() ? "true" : "false"; break;
    case ItemType::Integer:
    case ItemType::Decimal:
    case ItemType::Double: append_number(out, item); break;
    case ItemType::String: append_json_string(out, item.as_string()); break;
    case ItemType::Object: {
      out.push_back('{');
      bool first = true;
      for (const auto& [key, value] : item.as_object().members()) {
        if (!first) out.push_back(',');
        first = false;
        append_json_string(out, key);
        out.push_back(':');
        append_json(out, value);
      }
      out.push_back('}');
      break;
    }
    case ItemType::Array: {
      out.push_back('[');
      bool first = true;
      for (const auto& value : item.as_array().members()) {
        if (!first) out.push_back(',');
        first = false;
        append_json(out, value);
      }
      out.push_back(']');
      break;
    }
  }
}

std::string to_json(const Item& item) {
  std::string out;
  append_json(out, item);
  return out;
}

std::string serialize_item(const Item& item, OutputStyle style) {
  std::string out;
  if (style == OutputStyle::Pretty) {
    append_pretty(out, item, 0);
  } else {
    append_json(out, item);
  }
  return out;
}

std::string serialize(const Sequence& seq, OutputStyle style) {
  std::string out;
  for (const Item& item : seq) {
    if (style == OutputStyle::Pretty) {
      append_pretty(out, item, 0);
    } else {
      append_json(out, item);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace jsoniq
