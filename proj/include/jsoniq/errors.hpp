#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jsoniq {

enum class ErrorCode {
  SyntaxError,
  UnresolvedVariable,
  UnsupportedFeature,
  TypeError,
  CastError,
  TreatError,
  DivByZero,
  EbvError,
  NonatomicKeyError,
  MultiItemKeyError,
  OrderIncomparable,
  DuplicateKey,
  JsonParseError,
  IoError,
  InvalidArgument,
  AnnotateError,
  CursorProtocol,
};

std::string_view error_code_name(ErrorCode code);
bool error_code_from_name(std::string_view name, ErrorCode& out);

// Errors raised before execution starts (parse, bind, plan).
bool is_static_error(ErrorCode code);

struct SourceSpan {
  std::uint32_t offset = 0;
  std::uint32_t line = 0;  // 1-based; 0 means unknown
  std::uint32_t column = 0;
  std::uint32_t length = 0;

  bool known() const { return line != 0; }
};

class QueryError : public std::runtime_error {
 public:
  QueryError(ErrorCode code, std::string message, SourceSpan span = {},
             std::vector<std::string> expected = {});

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }
  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

  // Attaches a location if none was recorded yet.
  QueryError with_span(SourceSpan span) const;

  // "TYPE_ERROR at 1:5: message"
  std::string describe() const;

 private:
  ErrorCode code_;
  std::string message_;
  SourceSpan span_;
  std::vector<std::string> expected_;
};

[[noreturn]] void throw_error(ErrorCode code, std::string message,
                              SourceSpan span = {});

}  // namespace jsoniq
