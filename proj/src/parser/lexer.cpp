#include "lexer.hpp"

#include <algorithm>
#include <cstdint>

namespace jsoniq::detail {

namespace {

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool ends_operand(Tok kind) {
  switch (kind) {
    case Tok::Name:
    case Tok::Var:
    case Tok::ContextItem:
    case Tok::Integer:
    case Tok::Decimal:
    case Tok::Double:
    case Tok::String:
    case Tok::RParen:
    case Tok::RBracket:
    case Tok::RBrace:
      return true;
    default:
      return false;
  }
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  Lexer(std::string_view text, const LineIndex& lines)
      : text_(text), lines_(lines) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", lines_.span(text_.size(), 0)});
        return out;
      }
      Tok prev = out.empty() ? Tok::End : out.back().kind;
      out.push_back(next(prev));
    }
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& msg,
                         std::size_t len = 1) {
    throw QueryError(ErrorCode::SyntaxError, msg,
                     lines_.span(at, std::min(len, text_.size() - at)));
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < text_.size() &&
             (text_[pos_] == ' ' || text_[pos_] == '\t' ||
              text_[pos_] == '\n' || text_[pos_] == '\r')) {
        ++pos_;
      }
      if (text_.substr(pos_, 2) != "(:") return;
      std::size_t start = pos_;
      int depth = 0;
      while (pos_ < text_.size()) {
        if (text_.substr(pos_, 2) == "(:") {
          ++depth;
          pos_ += 2;
        } else if (text_.substr(pos_, 2) == ":)") {
          --depth;
          pos_ += 2;
          if (depth == 0) break;
        } else {
          ++pos_;
        }
      }
      if (depth != 0) fail(start, "unterminated comment", 2);
    }
  }

  Token make(Tok kind, std::size_t start, std::string text = {}) {
    return {kind, std::move(text), lines_.span(start, pos_ - start)};
  }

  Token next(Tok prev) {
    std::size_t start = pos_;
    char c = text_[pos_];
    auto peek = [&](std::size_t k) {
      return pos_ + k < text_.size() ? text_[pos_ + k] : '\0';
    };

    if (is_name_start(c)) {
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      return make(Tok::Name, start, std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '$') {
      if (peek(1) == '$') {
        pos_ += 2;
        return make(Tok::ContextItem, start);
      }
      ++pos_;
      if (pos_ >= text_.size() || !is_name_start(text_[pos_])) {
        fail(start, "expected a variable name after '$'");
      }
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      return make(Tok::Var, start,
                  std::string(text_.substr(start + 1, pos_ - start - 1)));
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)) && !ends_operand(prev))) {
      return number(start);
    }
    if (c == '"') return string_literal(start);

    auto one = [&](Tok kind) {
      ++pos_;
      return make(kind, start);
    };
    auto two = [&](Tok kind) {
      pos_ += 2;
      return make(kind, start);
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case ',': return one(Tok::Comma);
      case ':': return peek(1) == '=' ? two(Tok::Assign) : one(Tok::Colon);
      case '.': return one(Tok::Dot);
      case '!': return peek(1) == '=' ? two(Tok::Ne) : one(Tok::Bang);
      case '+': return one(Tok::Plus);
      case '-': return one(Tok::Minus);
      case '*': return one(Tok::Star);
      case '|': return peek(1) == '|' ? two(Tok::Concat) : one(Tok::Pipe);
      case '?': return one(Tok::Question);
      case '=': return one(Tok::Eq);
      case '<': return peek(1) == '=' ? two(Tok::Le) : one(Tok::Lt);
      case '>': return peek(1) == '=' ? two(Tok::Ge) : one(Tok::Gt);
      default: break;
    }
    fail(start, "unexpected character");
  }

  Token number(std::size_t start) {
    Tok kind = Tok::Integer;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      kind = Tok::Decimal;
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() && is_digit(text_[pos_])) {
        kind = Tok::Double;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (pos_ < text_.size() && is_name_start(text_[pos_])) {
      fail(start, "malformed numeric literal", pos_ - start + 1);
    }
    return make(kind, start, std::string(text_.substr(start, pos_ - start)));
  }

  unsigned hex4(std::size_t at) {
    if (at + 4 > text_.size()) fail(at, "truncated \\u escape");
    unsigned v = 0;
    for (std::size_t i = at; i < at + 4; ++i) {
      char h = text_[i];
      v <<= 4;
      if (h >= '0' && h <= '9') v |= static_cast<unsigned>(h - '0');
      else if (h >= 'a' && h <= 'f') v |= static_cast<unsigned>(h - 'a' + 10);
      else if (h >= 'A' && h <= 'F') v |= static_cast<unsigned>(h - 'A' + 10);
      else fail(i, "invalid hex digit in \\u escape");
    }
    return v;
  }

  Token string_literal(std::size_t start) {
    std::string value;
    ++pos_;
    for (;;) {
      if (pos_ >= text_.size()) fail(start, "unterminated string literal");
      char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c != '\\') {
        value += c;
        ++pos_;
        continue;
      }
      if (pos_ + 1 >= text_.size()) fail(start, "unterminated string literal");
      char e = text_[pos_ + 1];
      pos_ += 2;
      switch (e) {
        case '"': value += '"'; break;
        case '\\': value += '\\'; break;
        case '/': value += '/'; break;
        case 'b': value += '\b'; break;
        case 'f': value += '\f'; break;
        case 'n': value += '\n'; break;
        case 'r': value += '\r'; break;
        case 't': value += '\t'; break;
        case 'u': {
          std::uint32_t cp = hex4(pos_);
          pos_ += 4;
          if (cp >= 0xD800 && cp <= 0xDBFF && text_.substr(pos_, 2) == "\\u") {
            std::uint32_t lo = hex4(pos_ + 2);
            if (lo >= 0xDC00 && lo <= 0xDFFF) {
              cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
              pos_ += 6;
            }
          }
          if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0xFFFD;
          append_utf8(value, cp);
          break;
        }
        default:
          fail(pos_ - 2, "invalid escape sequence in string literal", 2);
      }
    }
    return make(Tok::String, start, std::move(value));
  }

  std::string_view text_;
  const LineIndex& lines_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view tok_display(Tok kind) {
  switch (kind) {
    case Tok::End: return "end of input";
    case Tok::Name: return "name";
    case Tok::Var: return "variable";
    case Tok::ContextItem: return "$$";
    case Tok::Integer: return "integer literal";
    case Tok::Decimal: return "decimal literal";
    case Tok::Double: return "double literal";
    case Tok::String: return "string literal";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBracket: return "[";
    case Tok::RBracket: return "]";
    case Tok::LBrace: return "{";
    case Tok::RBrace: return "}";
    case Tok::Comma: return ",";
    case Tok::Colon: return ":";
    case Tok::Assign: return ":=";
    case Tok::Dot: return ".";
    case Tok::Bang: return "!";
    case Tok::Plus: return "+";
    case Tok::Minus: return "-";
    case Tok::Star: return "*";
    case Tok::Pipe: return "|";
    case Tok::Concat: return "||";
    case Tok::Question: return "?";
    case Tok::Eq: return "=";
    case Tok::Ne: return "!=";
    case Tok::Lt: return "<";
    case Tok::Le: return "<=";
    case Tok::Gt: return ">";
    case Tok::Ge: return ">=";
  }
  return "?";
}

LineIndex::LineIndex(std::string_view text) {
  starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') starts_.push_back(i + 1);
  }
}

SourceSpan LineIndex::span(std::size_t offset, std::size_t length) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
  std::size_t line = static_cast<std::size_t>(it - starts_.begin());
  SourceSpan s;
  s.offset = static_cast<std::uint32_t>(offset);
  s.line = static_cast<std::uint32_t>(line);
  s.column = static_cast<std::uint32_t>(offset - starts_[line - 1] + 1);
  s.length = static_cast<std::uint32_t>(length);
  return s;
}

std::vector<Token> tokenize(std::string_view text, const LineIndex& lines) {
  return Lexer(text, lines).run();
}

}  // namespace jsoniq::detail
