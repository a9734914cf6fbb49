#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jsoniq/errors.hpp"

namespace jsoniq::detail {

enum class Tok {
  End,
  Name,
  Var,          // $name; text holds the name
  ContextItem,  // $$
  Integer,
  Decimal,
  Double,
  String,  // text holds the unescaped value
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Assign,  // :=
  Dot,
  Bang,
  Plus,
  Minus,
  Star,
  Pipe,
  Concat,  // ||
  Question,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
};

std::string_view tok_display(Tok kind);

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class LineIndex {
 public:
  explicit LineIndex(std::string_view text);
  SourceSpan span(std::size_t offset, std::size_t length) const;

 private:
  std::vector<std::size_t> starts_;
};

std::vector<Token> tokenize(std::string_view text, const LineIndex& lines);

}  // namespace jsoniq::detail
