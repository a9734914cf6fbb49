#pragma once

#include <string>
#include <string_view>

#include "jsoniq/item.hpp"

namespace jsoniq {

// Parses one JSON document (surrounding whitespace allowed). Numbers without
// '.', 'e' or 'E' become integers, with only '.' decimals, and with an
// exponent doubles. Duplicate object keys are rejected. Throws
// JsonParseError with the byte offset in the message.
Item parse_json_line(std::string_view text);

enum class OutputStyle { JsonLines, Pretty };

// Compact JSON text of one item.
std::string to_json(const Item& item);
void append_json(std::string& out, const Item& item);

// One document per item, each followed by '\n'.
std::string serialize(const Sequence& seq, OutputStyle style);
std::string serialize_item(const Item& item, OutputStyle style);

void append_json_string(std::string& out, std::string_view text);

}  // namespace jsoniq
