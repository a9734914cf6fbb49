#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "jsoniq/parser.hpp"
#include "support/generators.hpp"

using namespace jsoniq;
using testgen::Rng;

namespace {

// Generates syntactically valid, closed queries.
class QueryGen {
 public:
  explicit QueryGen(Rng& rng) : rng_(rng) {}

  std::string expr(int depth) {
    if (depth <= 0) return leaf();
    switch (rng_.range(0, 13)) {
      case 0: return expr(depth - 1) + " + " + expr(depth - 1);
      case 1: return "(" + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 2: return "(" + expr(depth - 1) + " eq " + expr(depth - 1) + ")";
      case 3: return "[" + expr(depth - 1) + "]";
      case 4: return "{\"k\": " + expr(depth - 1) + "}";
      case 5: return "(" + expr(depth - 1) + ")[" + focus_expr(depth - 1) + "]";
      case 6: return "(" + expr(depth - 1) + ")!(" + focus_expr(depth - 1) + ")";
      case 7: return "(if (" + expr(depth - 1) + ") then " + expr(depth - 1) + " else " +
                     expr(depth - 1) + ")";
      case 8: return "(" + flwor(depth - 1) + ")";
      case 9: return "count(" + expr(depth - 1) + ")";
      case 10: return "(" + expr(depth - 1) + ").key[]";
      case 11: return "(not " + expr(depth - 1) + ")";
      case 12: return "(try { " + expr(depth - 1) + " } catch * { () })";
      default: return "(" + expr(depth - 1) + " to " + expr(depth - 1) + ")";
    }
  }

 private:
  std::string leaf() {
    if (!scope_.empty() && rng_.chance(0.5)) return "$" + rng_.pick(scope_);
    switch (rng_.range(0, 4)) {
      case 0: return std::to_string(rng_.range(0, 99));
      case 1: return "\"s" + std::to_string(rng_.range(0, 9)) + "\"";
      case 2: return "1.5";
      case 3: return "()";
      default: return "null";
    }
  }

  std::string focus_expr(int depth) {
    ++focus_;
    std::string inner = rng_.chance(0.5) ? "$$" : "$$ eq (" + expr(depth) + ")";
    --focus_;
    return inner;
  }

  std::string flwor(int depth) {
    std::size_t mark = scope_.size();
    std::string v = "v" + std::to_string(counter_++);
    std::string out = "for $" + v + " in " + expr(depth) + " ";
    scope_.push_back(v);
    int clauses = static_cast<int>(rng_.range(0, 3));
    for (int i = 0; i < clauses; ++i) {
      switch (rng_.range(0, 4)) {
        case 0: {
          std::string w = "v" + std::to_string(counter_++);
          out += "let $" + w + " := " + expr(depth) + " ";
          scope_.push_back(w);
          break;
        }
        case 1: out += "where " + expr(depth) + " "; break;
        case 2: {
          std::string g = "v" + std::to_string(counter_++);
          out += "group by $" + g + " := " + expr(depth) + " ";
          scope_.push_back(g);
          break;
        }
        case 3: out += "order by " + expr(depth) + " descending "; break;
        default: {
          std::string c = "v" + std::to_string(counter_++);
          out += "count $" + c + " ";
          scope_.push_back(c);
          break;
        }
      }
    }
    out += "return " + expr(depth);
    scope_.resize(mark);
    return out;
  }

  Rng& rng_;
  std::vector<std::string> scope_;
  int counter_ = 0;
  int focus_ = 0;
};

void check_spans(const Expr& e, std::size_t text_size, int& count) {
  ++count;
  CHECK(e.span.known());
  CHECK(e.span.offset + e.span.length <= text_size);
  for (const auto& c : e.children) check_spans(*c, text_size, count);
  for (const auto& clause : e.clauses) {
    CHECK(clause.span.offset + clause.span.length <= text_size);
    if (clause.expr) check_spans(*clause.expr, text_size, count);
    for (const auto& g : clause.group_specs) {
      if (g.expr) check_spans(*g.expr, text_size, count);
    }
    for (const auto& o : clause.order_specs) check_spans(*o.expr, text_size, count);
  }
}

}  // namespace

TEST_CASE("property: generated queries parse, bind and keep spans inside the text") {
  Rng rng(21);
  for (int i = 0; i < 1500; ++i) {
    QueryGen gen(rng);
    std::string query = gen.expr(static_cast<int>(rng.range(1, 5)));
    CAPTURE(query);
    Ast ast = parse_query(query);
    bind_variables(ast);
    int nodes = 0;
    check_spans(*ast.root, query.size(), nodes);
    CHECK(nodes > 0);
    CHECK(to_sexpr(*parse_query(query).root) == to_sexpr(*parse_query(query).root));
  }
}

TEST_CASE("property: the parser is total on noise") {
  Rng rng(22);
  for (int i = 0; i < 5000; ++i) {
    std::string query = testgen::random_query_noise(rng, rng.range(1, 40));
    try {
      Ast ast = parse_query(query);
      bind_variables(ast, {"x"});
    } catch (const QueryError& e) {
      bool expected = e.code() == ErrorCode::SyntaxError ||
                      e.code() == ErrorCode::UnresolvedVariable;
      CHECK(expected);
      CHECK(e.span().offset <= query.size());
    }
  }
}

TEST_CASE("property: truncating a valid query never crashes") {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    QueryGen gen(rng);
    std::string query = gen.expr(3);
    for (std::size_t cut = 0; cut < query.size(); cut += 1 + rng.index(4)) {
      std::string prefix = query.substr(0, cut);
      try {
        Ast ast = parse_query(prefix);
        bind_variables(ast);
      } catch (const QueryError& e) {
        CHECK(e.span().offset <= prefix.size());
      }
    }
  }
}
