#include "jsoniq/errors.hpp"

#include <array>
#include <utility>

namespace jsoniq {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 17> kNames{{
    {ErrorCode::SyntaxError, "SYNTAX_ERROR"},
    {ErrorCode::UnresolvedVariable, "UNRESOLVED_VARIABLE"},
    {ErrorCode::UnsupportedFeature, "UNSUPPORTED_FEATURE"},
    {ErrorCode::TypeError, "TYPE_ERROR"},
    {ErrorCode::CastError, "CAST_ERROR"},
    {ErrorCode::TreatError, "TREAT_ERROR"},
    {ErrorCode::DivByZero, "DIV_BY_ZERO"},
    {ErrorCode::EbvError, "EBV_ERROR"},
    {ErrorCode::NonatomicKeyError, "NONATOMIC_KEY_ERROR"},
    {ErrorCode::MultiItemKeyError, "MULTI_ITEM_KEY_ERROR"},
    {ErrorCode::OrderIncomparable, "ORDER_INCOMPARABLE"},
    {ErrorCode::DuplicateKey, "DUPLICATE_KEY"},
    {ErrorCode::JsonParseError, "JSON_PARSE_ERROR"},
    {ErrorCode::IoError, "IO_ERROR"},
    {ErrorCode::InvalidArgument, "INVALID_ARGUMENT"},
    {ErrorCode::AnnotateError, "ANNOTATE_ERROR"},
    {ErrorCode::CursorProtocol, "CURSOR_PROTOCOL"},
}};

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "UNKNOWN_ERROR";
}

bool error_code_from_name(std::string_view name, ErrorCode& out) {
  for (const auto& [c, n] : kNames) {
    if (n == name) {
      out = c;
      return true;
    }
  }
  return false;
}

bool is_static_error(ErrorCode code) {
  return code == ErrorCode::SyntaxError ||
         code == ErrorCode::UnresolvedVariable ||
         code == ErrorCode::UnsupportedFeature;
}

QueryError::QueryError(ErrorCode code, std::string message, SourceSpan span,
                       std::vector<std::string> expected)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      message_(std::move(message)),
      span_(span),
      expected_(std::move(expected)) {}

QueryError QueryError::with_span(SourceSpan span) const {
  if (span_.known() || !span.known()) return *this;
  return QueryError(code_, message_, span, expected_);
}

std::string QueryError::describe() const {
  std::string out(error_code_name(code_));
  if (span_.known()) {
    out += " at " + std::to_string(span_.line) + ":" +
           std::to_string(span_.column);
  }
  out += ": " + message_;
  if (!expected_.empty()) {
    out += " (expected one of:";
    for (const auto& e : expected_) out += " " + e;
    out += ")";
  }
  return out;
}

void throw_error(ErrorCode code, std::string message, SourceSpan span) {
  throw QueryError(code, std::move(message), span);
}

}  // namespace jsoniq
