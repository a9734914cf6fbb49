#include "jsoniq/parser.hpp"

#include <cstdlib>
#include <initializer_list>
#include <utility>

#include "lexer.hpp"

namespace jsoniq {

namespace {

using detail::LineIndex;
using detail::Tok;
using detail::Token;

constexpr int kMaxDepth = 256;

const std::vector<std::string> kExprStart = {
    "literal", "variable", "$$", "(", "[", "{", "name", "-", "+"};

class Parser {
 public:
  Parser(std::string_view text, const LineIndex& lines,
         std::vector<Token> tokens)
      : text_(text), lines_(lines), toks_(std::move(tokens)) {}

  ExprPtr parse() {
    ExprPtr root = parse_expr();
    if (peek().kind != Tok::End) {
      fail_expected({"end of input", ",", "operator"});
    }
    return root;
  }

 private:
  class DepthGuard {
   public:
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) {
        throw QueryError(ErrorCode::SyntaxError, "expression nesting too deep",
                         p_.peek().span);
      }
    }
    ~DepthGuard() { --p_.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;

   private:
    Parser& p_;
  };

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_name(std::string_view name, std::size_t k = 0) const {
    return peek(k).kind == Tok::Name && peek(k).text == name;
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail_expected(std::vector<std::string> expected) {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input"
                        : t.text.empty()   ? std::string(detail::tok_display(t.kind))
                                           : std::string(text_.substr(t.span.offset, t.span.length));
    throw QueryError(ErrorCode::SyntaxError, "unexpected '" + found + "'",
                     t.span, std::move(expected));
  }

  const Token& expect(Tok kind) {
    if (!at(kind)) fail_expected({std::string(detail::tok_display(kind))});
    return advance();
  }
  void expect_name(std::string_view name) {
    if (!at_name(name)) fail_expected({std::string(name)});
    advance();
  }
  std::string expect_var() {
    if (!at(Tok::Var)) fail_expected({"variable"});
    return advance().text;
  }

  SourceSpan span_from(std::size_t start_tok) const {
    const SourceSpan& a = toks_[start_tok].span;
    std::size_t last = pos_ > start_tok ? pos_ - 1 : start_tok;
    const SourceSpan& b = toks_[last].span;
    SourceSpan s = a;
    std::size_t end = b.offset + b.length;
    s.length = static_cast<std::uint32_t>(end > a.offset ? end - a.offset : 0);
    return s;
  }

  ExprPtr node(ExprKind kind, std::size_t start_tok) {
    return std::make_unique<Expr>(kind, span_from(start_tok));
  }

  ExprPtr binary(ExprKind kind, std::size_t start, ExprPtr lhs, ExprPtr rhs) {
    auto e = node(kind, start);
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
  }

  // Expr := ExprSingle ("," ExprSingle)*
  ExprPtr parse_expr() {
    std::size_t start = pos_;
    ExprPtr first = parse_expr_single();
    if (!at(Tok::Comma)) return first;
    std::vector<ExprPtr> items;
    items.push_back(std::move(first));
    while (at(Tok::Comma)) {
      advance();
      items.push_back(parse_expr_single());
    }
    auto e = node(ExprKind::Comma, start);
    e->children = std::move(items);
    return e;
  }

  bool at_expr_single_keyword() const {
    if (peek().kind != Tok::Name) return false;
    const std::string& n = peek().text;
    Tok next = peek(1).kind;
    if ((n == "for" || n == "let" || n == "some" || n == "every") &&
        next == Tok::Var) {
      return true;
    }
    if ((n == "if" || n == "switch" || n == "typeswitch") &&
        next == Tok::LParen) {
      return true;
    }
    return n == "try" && next == Tok::LBrace;
  }

  ExprPtr parse_expr_single() {
    DepthGuard guard(*this);
    if (at_expr_single_keyword()) {
      const std::string& n = peek().text;
      if (n == "for" || n == "let") return parse_flwor();
      if (n == "some" || n == "every") return parse_quantified();
      if (n == "if") return parse_if();
      if (n == "switch") return parse_switch();
      if (n == "typeswitch") return parse_typeswitch();
      return parse_try();
    }
    return parse_or();
  }

  ExprPtr parse_flwor() {
    std::size_t start = pos_;
    std::vector<Clause> clauses;
    for (;;) {
      std::size_t cstart = pos_;
      if (at_name("for") && peek(1).kind == Tok::Var) {
        advance();
        do {
          std::size_t bstart = pos_;
          Clause c{ClauseKind::For, {}, expect_var(), kNoVar, nullptr, {}, {}, false};
          if (at_name("at")) {
            throw QueryError(ErrorCode::SyntaxError,
                             "positional variables in for clauses are not supported",
                             peek().span, {"in"});
          }
          expect_name("in");
          c.expr = parse_expr_single();
          c.span = span_from(bstart);
          clauses.push_back(std::move(c));
        } while (at(Tok::Comma) && peek(1).kind == Tok::Var && advance().kind == Tok::Comma);
      } else if (at_name("let") && peek(1).kind == Tok::Var) {
        advance();
        do {
          std::size_t bstart = pos_;
          Clause c{ClauseKind::Let, {}, expect_var(), kNoVar, nullptr, {}, {}, false};
          expect(Tok::Assign);
          c.expr = parse_expr_single();
          c.span = span_from(bstart);
          clauses.push_back(std::move(c));
        } while (at(Tok::Comma) && peek(1).kind == Tok::Var && advance().kind == Tok::Comma);
      } else if (clauses.empty()) {
        fail_expected({"for", "let"});
      } else if (at_name("where")) {
        advance();
        Clause c{ClauseKind::Where, {}, "", kNoVar, parse_expr_single(), {}, {}, false};
        c.span = span_from(cstart);
        clauses.push_back(std::move(c));
      } else if (at_name("group") && at_name("by", 1)) {
        advance();
        advance();
        Clause c{ClauseKind::GroupBy, {}, "", kNoVar, nullptr, {}, {}, false};
        do {
          c.group_specs.push_back(parse_group_spec());
        } while (at(Tok::Comma) && advance().kind == Tok::Comma);
        c.span = span_from(cstart);
        clauses.push_back(std::move(c));
      } else if ((at_name("order") && at_name("by", 1)) ||
                 (at_name("stable") && at_name("order", 1) && at_name("by", 2))) {
        Clause c{ClauseKind::OrderBy, {}, "", kNoVar, nullptr, {}, {}, false};
        if (at_name("stable")) {
          c.stable = true;
          advance();
        }
        advance();
        advance();
        do {
          c.order_specs.push_back(parse_order_spec());
        } while (at(Tok::Comma) && advance().kind == Tok::Comma);
        c.span = span_from(cstart);
        clauses.push_back(std::move(c));
      } else if (at_name("count") && peek(1).kind == Tok::Var) {
        advance();
        Clause c{ClauseKind::Count, {}, expect_var(), kNoVar, nullptr, {}, {}, false};
        c.span = span_from(cstart);
        clauses.push_back(std::move(c));
      } else if (at_name("return")) {
        advance();
        ExprPtr ret = parse_expr_single();
        auto e = node(ExprKind::Flwor, start);
        e->clauses = std::move(clauses);
        e->children.push_back(std::move(ret));
        return e;
      } else {
        fail_expected({"for", "let", "where", "group by", "order by", "count",
                       "return"});
      }
    }
  }

  GroupSpec parse_group_spec() {
    std::size_t start = pos_;
    GroupSpec spec;
    if (at(Tok::Var) && peek(1).kind == Tok::Assign) {
      spec.var = advance().text;
      advance();
      spec.expr = parse_expr_single();
    } else {
      ExprPtr e = parse_expr_single();
      if (e->kind == ExprKind::VarRef) {
        spec.var = e->name;
      } else {
        spec.expr = std::move(e);
      }
    }
    spec.span = span_from(start);
    return spec;
  }

  OrderSpec parse_order_spec() {
    std::size_t start = pos_;
    OrderSpec spec;
    spec.expr = parse_expr_single();
    SourceSpan s = span_from(start);
    spec.text = std::string(text_.substr(s.offset, s.length));
    if (at_name("ascending")) {
      advance();
    } else if (at_name("descending")) {
      advance();
      spec.descending = true;
    }
    if (at_name("empty")) {
      advance();
      if (at_name("greatest")) {
        spec.empty_greatest = true;
      } else if (!at_name("least")) {
        fail_expected({"greatest", "least"});
      }
      advance();
    }
    return spec;
  }

  ExprPtr parse_quantified() {
    std::size_t start = pos_;
    bool every = advance().text == "every";
    auto e = std::make_unique<Expr>(ExprKind::Quantified, SourceSpan{});
    e->every = every;
    do {
      e->var_names.push_back(expect_var());
      expect_name("in");
      e->children.push_back(parse_expr_single());
    } while (at(Tok::Comma) && advance().kind == Tok::Comma);
    expect_name("satisfies");
    e->children.push_back(parse_expr_single());
    e->span = span_from(start);
    return e;
  }

  ExprPtr parse_if() {
    std::size_t start = pos_;
    advance();
    expect(Tok::LParen);
    ExprPtr cond = parse_expr();
    expect(Tok::RParen);
    expect_name("then");
    ExprPtr then_branch = parse_expr_single();
    expect_name("else");
    ExprPtr else_branch = parse_expr_single();
    auto e = node(ExprKind::If, start);
    e->children.push_back(std::move(cond));
    e->children.push_back(std::move(then_branch));
    e->children.push_back(std::move(else_branch));
    return e;
  }

  ExprPtr parse_switch() {
    std::size_t start = pos_;
    advance();
    auto e = std::make_unique<Expr>(ExprKind::Switch, SourceSpan{});
    expect(Tok::LParen);
    e->children.push_back(parse_expr());
    expect(Tok::RParen);
    while (at_name("case")) {
      std::size_t n = 0;
      while (at_name("case")) {
        advance();
        e->children.push_back(parse_expr_single());
        ++n;
      }
      expect_name("return");
      e->children.push_back(parse_expr_single());
      e->case_sizes.push_back(n);
    }
    expect_name("default");
    expect_name("return");
    e->children.push_back(parse_expr_single());
    e->span = span_from(start);
    return e;
  }

  ExprPtr parse_typeswitch() {
    std::size_t start = pos_;
    advance();
    auto e = std::make_unique<Expr>(ExprKind::Typeswitch, SourceSpan{});
    expect(Tok::LParen);
    e->children.push_back(parse_expr());
    expect(Tok::RParen);
    while (at_name("case")) {
      advance();
      TypeswitchCase c;
      if (at(Tok::Var)) {
        c.var = advance().text;
        expect_name("as");
      }
      c.types.push_back(parse_sequence_type());
      while (at(Tok::Pipe)) {
        advance();
        c.types.push_back(parse_sequence_type());
      }
      expect_name("return");
      e->children.push_back(parse_expr_single());
      e->cases.push_back(std::move(c));
    }
    expect_name("default");
    if (at(Tok::Var)) e->default_var = advance().text;
    expect_name("return");
    e->children.push_back(parse_expr_single());
    e->span = span_from(start);
    return e;
  }

  ExprPtr parse_braced_expr() {
    std::size_t start = pos_;
    expect(Tok::LBrace);
    if (at(Tok::RBrace)) {
      advance();
      return node(ExprKind::EmptySequence, start);
    }
    ExprPtr body = parse_expr();
    expect(Tok::RBrace);
    return body;
  }

  ExprPtr parse_try() {
    std::size_t start = pos_;
    advance();
    auto e = std::make_unique<Expr>(ExprKind::TryCatch, SourceSpan{});
    e->children.push_back(parse_braced_expr());
    if (!at_name("catch")) fail_expected({"catch"});
    while (at_name("catch")) {
      advance();
      std::vector<std::string> codes;
      do {
        if (at(Tok::Star)) {
          advance();
          codes.push_back("*");
        } else if (at(Tok::Name)) {
          std::string code = advance().text;
          if (at(Tok::Colon) && peek(1).kind == Tok::Name) {
            advance();
            code += ":" + advance().text;
          }
          codes.push_back(std::move(code));
        } else {
          fail_expected({"*", "error code"});
        }
      } while (at(Tok::Pipe) && advance().kind == Tok::Pipe);
      e->catch_codes.push_back(std::move(codes));
      e->children.push_back(parse_braced_expr());
    }
    e->span = span_from(start);
    return e;
  }

  SequenceType parse_sequence_type() {
    if (!at(Tok::Name)) fail_expected({"sequence type"});
    const Token& t = peek();
    auto test = item_test_from_name(t.text);
    if (!test) fail_expected({"sequence type"});
    advance();
    SequenceType type{*test, Occurrence::One};
    if (at(Tok::LParen) && peek(1).kind == Tok::RParen) {
      advance();
      advance();
    } else if (*test == ItemTest::Empty) {
      fail_expected({"("});
    }
    if (*test == ItemTest::Empty) return type;
    if (at(Tok::Question)) {
      advance();
      type.occurrence = Occurrence::Optional;
    } else if (at(Tok::Star)) {
      advance();
      type.occurrence = Occurrence::Star;
    } else if (at(Tok::Plus)) {
      advance();
      type.occurrence = Occurrence::Plus;
    }
    return type;
  }

  ExprPtr parse_or() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_and();
    while (at_name("or")) {
      advance();
      lhs = binary(ExprKind::Or, start, std::move(lhs), parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_not();
    while (at_name("and")) {
      advance();
      lhs = binary(ExprKind::And, start, std::move(lhs), parse_not());
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at_name("not") && peek(1).kind != Tok::LParen && starts_operand(1)) {
      DepthGuard guard(*this);
      std::size_t start = pos_;
      advance();
      ExprPtr operand = parse_not();
      auto e = node(ExprKind::Not, start);
      e->children.push_back(std::move(operand));
      return e;
    }
    return parse_comparison();
  }

  bool starts_operand(std::size_t k) const {
    switch (peek(k).kind) {
      case Tok::Name:
      case Tok::Var:
      case Tok::ContextItem:
      case Tok::Integer:
      case Tok::Decimal:
      case Tok::Double:
      case Tok::String:
      case Tok::LParen:
      case Tok::LBracket:
      case Tok::LBrace:
      case Tok::Minus:
      case Tok::Plus:
        return true;
      default:
        return false;
    }
  }

  ExprPtr parse_comparison() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_concat();
    ExprKind kind = ExprKind::ValueComparison;
    CompareOp op;
    const Token& t = peek();
    if (t.kind == Tok::Name && t.text == "eq") op = CompareOp::Eq;
    else if (t.kind == Tok::Name && t.text == "ne") op = CompareOp::Ne;
    else if (t.kind == Tok::Name && t.text == "lt") op = CompareOp::Lt;
    else if (t.kind == Tok::Name && t.text == "le") op = CompareOp::Le;
    else if (t.kind == Tok::Name && t.text == "gt") op = CompareOp::Gt;
    else if (t.kind == Tok::Name && t.text == "ge") op = CompareOp::Ge;
    else {
      kind = ExprKind::GeneralComparison;
      switch (t.kind) {
        case Tok::Eq: op = CompareOp::Eq; break;
        case Tok::Ne: op = CompareOp::Ne; break;
        case Tok::Lt: op = CompareOp::Lt; break;
        case Tok::Le: op = CompareOp::Le; break;
        case Tok::Gt: op = CompareOp::Gt; break;
        case Tok::Ge: op = CompareOp::Ge; break;
        default: return lhs;
      }
    }
    advance();
    auto e = binary(kind, start, std::move(lhs), parse_concat());
    e->compare_op = op;
    return e;
  }

  ExprPtr parse_concat() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_range();
    while (at(Tok::Concat)) {
      advance();
      lhs = binary(ExprKind::StringConcat, start, std::move(lhs), parse_range());
    }
    return lhs;
  }

  ExprPtr parse_range() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_additive();
    if (at_name("to")) {
      advance();
      return binary(ExprKind::Range, start, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      ArithOp op = advance().kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      lhs = binary(ExprKind::Arithmetic, start, std::move(lhs),
                   parse_multiplicative());
      lhs->arith_op = op;
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_instance_of();
    for (;;) {
      ArithOp op;
      if (at(Tok::Star)) op = ArithOp::Mul;
      else if (at_name("div")) op = ArithOp::Div;
      else if (at_name("idiv")) op = ArithOp::IDiv;
      else if (at_name("mod")) op = ArithOp::Mod;
      else return lhs;
      advance();
      lhs = binary(ExprKind::Arithmetic, start, std::move(lhs),
                   parse_instance_of());
      lhs->arith_op = op;
    }
  }

  ExprPtr parse_instance_of() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_treat();
    if (at_name("instance") && at_name("of", 1)) {
      advance();
      advance();
      SequenceType type = parse_sequence_type();
      auto e = node(ExprKind::InstanceOf, start);
      e->children.push_back(std::move(lhs));
      e->sequence_type = type;
      return e;
    }
    return lhs;
  }

  ExprPtr parse_treat() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_castable();
    if (at_name("treat") && at_name("as", 1)) {
      advance();
      advance();
      SequenceType type = parse_sequence_type();
      auto e = node(ExprKind::Treat, start);
      e->children.push_back(std::move(lhs));
      e->sequence_type = type;
      return e;
    }
    return lhs;
  }

  void parse_atomic_target(Expr& e) {
    if (!at(Tok::Name)) fail_expected({"atomic type"});
    auto type = atomic_type_from_name(peek().text);
    if (!type) fail_expected({"atomic type"});
    advance();
    e.cast_type = *type;
    if (at(Tok::Question)) {
      advance();
      e.allow_empty = true;
    }
  }

  ExprPtr parse_castable() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_cast();
    if (at_name("castable") && at_name("as", 1)) {
      advance();
      advance();
      auto e = std::make_unique<Expr>(ExprKind::Castable, SourceSpan{});
      e->children.push_back(std::move(lhs));
      parse_atomic_target(*e);
      e->span = span_from(start);
      return e;
    }
    return lhs;
  }

  ExprPtr parse_cast() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_unary();
    if (at_name("cast") && at_name("as", 1)) {
      advance();
      advance();
      auto e = std::make_unique<Expr>(ExprKind::Cast, SourceSpan{});
      e->children.push_back(std::move(lhs));
      parse_atomic_target(*e);
      e->span = span_from(start);
      return e;
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    std::size_t start = pos_;
    bool negative = false;
    bool any = false;
    while (at(Tok::Minus) || at(Tok::Plus)) {
      if (advance().kind == Tok::Minus) negative = !negative;
      any = true;
    }
    ExprPtr operand = parse_simple_map();
    if (!any) return operand;
    auto e = node(negative ? ExprKind::Negate : ExprKind::Arithmetic, start);
    if (negative) {
      e->children.push_back(std::move(operand));
      return e;
    }
    // Unary plus: 0 + x keeps the numeric type check without changing value.
    auto zero = std::make_unique<Expr>(ExprKind::Literal, e->span);
    zero->literal = Item::integer(std::int64_t{0});
    e->arith_op = ArithOp::Add;
    e->children.push_back(std::move(zero));
    e->children.push_back(std::move(operand));
    return e;
  }

  ExprPtr parse_simple_map() {
    std::size_t start = pos_;
    ExprPtr lhs = parse_postfix();
    while (at(Tok::Bang)) {
      advance();
      lhs = binary(ExprKind::SimpleMap, start, std::move(lhs), parse_postfix());
    }
    return lhs;
  }

  bool adjacent(std::size_t i) const {
    return toks_[i].span.offset + toks_[i].span.length ==
           toks_[i + 1].span.offset;
  }

  ExprPtr parse_postfix() {
    std::size_t start = pos_;
    ExprPtr e = parse_primary();
    for (;;) {
      if (at(Tok::LBracket)) {
        if (peek(1).kind == Tok::RBracket) {
          advance();
          advance();
          auto u = node(ExprKind::ArrayUnbox, start);
          u->children.push_back(std::move(e));
          e = std::move(u);
        } else if (peek(1).kind == Tok::LBracket && adjacent(pos_)) {
          advance();
          advance();
          ExprPtr index = parse_expr();
          expect(Tok::RBracket);
          expect(Tok::RBracket);
          e = binary(ExprKind::ArrayAccess, start, std::move(e), std::move(index));
        } else {
          advance();
          ExprPtr pred = parse_expr();
          expect(Tok::RBracket);
          e = binary(ExprKind::Predicate, start, std::move(e), std::move(pred));
        }
      } else if (at(Tok::Dot)) {
        advance();
        auto lookup = std::make_unique<Expr>(ExprKind::ObjectLookup, SourceSpan{});
        lookup->children.push_back(std::move(e));
        if (at(Tok::Name) || at(Tok::String)) {
          lookup->name = advance().text;
        } else if (at(Tok::Var)) {
          std::size_t vstart = pos_;
          auto v = std::make_unique<Expr>(ExprKind::VarRef, peek().span);
          v->name = advance().text;
          v->span = span_from(vstart);
          lookup->children.push_back(std::move(v));
        } else if (at(Tok::ContextItem)) {
          lookup->children.push_back(
              std::make_unique<Expr>(ExprKind::ContextItem, advance().span));
        } else if (at(Tok::LParen)) {
          lookup->children.push_back(parse_parenthesized());
        } else {
          fail_expected({"name", "string literal", "variable", "$$", "("});
        }
        lookup->span = span_from(start);
        e = std::move(lookup);
      } else if (at(Tok::LParen) && (e->kind == ExprKind::VarRef ||
                                     e->kind == ExprKind::ContextItem)) {
        auto call = std::make_unique<Expr>(ExprKind::DynamicCall, SourceSpan{});
        call->children.push_back(std::move(e));
        parse_arguments(*call);
        call->span = span_from(start);
        e = std::move(call);
      } else {
        return e;
      }
    }
  }

  void parse_arguments(Expr& call) {
    expect(Tok::LParen);
    if (at(Tok::RParen)) {
      advance();
      return;
    }
    do {
      call.children.push_back(parse_expr_single());
    } while (at(Tok::Comma) && advance().kind == Tok::Comma);
    expect(Tok::RParen);
  }

  ExprPtr parse_parenthesized() {
    std::size_t start = pos_;
    expect(Tok::LParen);
    if (at(Tok::RParen)) {
      advance();
      return node(ExprKind::EmptySequence, start);
    }
    ExprPtr inner = parse_expr();
    expect(Tok::RParen);
    return inner;
  }

  Item numeric_literal(const Token& t) {
    switch (t.kind) {
      case Tok::Integer:
        return Item::integer(*parse_integer(t.text));
      case Tok::Decimal: {
        std::string text = t.text;
        if (text.back() == '.') text += '0';
        return Item::decimal(*Decimal::parse(text));
      }
      default:
        return Item::make_double(std::strtod(t.text.c_str(), nullptr));
    }
  }

  ExprPtr parse_primary() {
    DepthGuard guard(*this);
    std::size_t start = pos_;
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Integer:
      case Tok::Decimal:
      case Tok::Double: {
        auto e = node(ExprKind::Literal, start);
        e->literal = numeric_literal(t);
        advance();
        return e;
      }
      case Tok::String: {
        auto e = node(ExprKind::Literal, start);
        e->literal = Item::string(t.text);
        advance();
        return e;
      }
      case Tok::Var: {
        auto e = node(ExprKind::VarRef, start);
        e->name = t.text;
        advance();
        return e;
      }
      case Tok::ContextItem:
        advance();
        return node(ExprKind::ContextItem, start);
      case Tok::LParen:
        return parse_parenthesized();
      case Tok::LBrace:
        return parse_object();
      case Tok::LBracket: {
        advance();
        auto e = std::make_unique<Expr>(ExprKind::ArrayConstructor, SourceSpan{});
        if (!at(Tok::RBracket)) e->children.push_back(parse_expr());
        expect(Tok::RBracket);
        e->span = span_from(start);
        return e;
      }
      case Tok::Name:
        break;
      default:
        fail_expected(kExprStart);
    }
    if (at_expr_single_keyword()) return parse_expr_single();
    if (peek(1).kind == Tok::LParen) {
      auto call = std::make_unique<Expr>(ExprKind::FunctionCall, SourceSpan{});
      call->name = advance().text;
      parse_arguments(*call);
      call->span = span_from(start);
      return call;
    }
    auto e = node(ExprKind::Literal, start);
    if (t.text == "true") e->literal = Item::boolean(true);
    else if (t.text == "false") e->literal = Item::boolean(false);
    else if (t.text == "null") e->literal = Item::null();
    else fail_expected(kExprStart);
    advance();
    return e;
  }

  ExprPtr parse_object() {
    std::size_t start = pos_;
    advance();
    auto e = std::make_unique<Expr>(ExprKind::ObjectConstructor, SourceSpan{});
    if (!at(Tok::RBrace)) {
      do {
        if ((at(Tok::Name) || at(Tok::String)) && peek(1).kind == Tok::Colon) {
          auto key = std::make_unique<Expr>(ExprKind::Literal, peek().span);
          key->literal = Item::string(advance().text);
          e->children.push_back(std::move(key));
        } else {
          e->children.push_back(parse_expr_single());
        }
        expect(Tok::Colon);
        e->children.push_back(parse_expr_single());
      } while (at(Tok::Comma) && advance().kind == Tok::Comma);
    }
    expect(Tok::RBrace);
    e->span = span_from(start);
    return e;
  }

  std::string_view text_;
  const LineIndex& lines_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Ast parse_query(std::string_view text) {
  LineIndex lines(text);
  Parser parser(text, lines, detail::tokenize(text, lines));
  Ast ast;
  ast.text = std::string(text);
  ast.root = parser.parse();
  return ast;
}

}  // namespace jsoniq
