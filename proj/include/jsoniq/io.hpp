#pragma once

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jsoniq/atomic.hpp"
#include "jsoniq/item.hpp"
#include "jsoniq/parallel.hpp"
#include "jsoniq/stats.hpp"

namespace jsoniq {

enum class BadLinePolicy { Fail, Skip };

struct SourceOptions {
  BadLinePolicy bad_lines = BadLinePolicy::Fail;
  ExecStats* stats = nullptr;
};

// Files matched by a path pattern, sorted by path. '*', '?' and '[...]'
// may appear in any component. A pattern without wildcards naming a
// directory selects the regular files in it. A missing literal path is an
// IoError; a wildcard pattern may match nothing.
std::vector<std::string> expand_pattern(std::string_view pattern);

// Byte range [begin, end) of one file.
struct FileRange {
  std::string path;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

// Splits the concatenation of the files into `partitions` contiguous byte
// ranges. A line belongs to the range containing its first byte.
std::vector<std::vector<FileRange>> split_files(const std::vector<std::string>& files,
                                                std::size_t partitions);

// Pull reader over the lines owned by a list of ranges. A trailing '\r' is
// removed; the final newline does not produce an empty line.
class LineReader {
 public:
  explicit LineReader(std::vector<FileRange> ranges, ExecStats* stats = nullptr);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool next(std::string_view& line);
  const std::string& path() const;
  // Byte offset of the last returned line within its file.
  std::uint64_t offset() const { return line_offset_; }

 private:
  bool open_next();

  std::vector<FileRange> ranges_;
  std::size_t current_ = 0;
  bool started_ = false;
  std::FILE* file_ = nullptr;
  std::uint64_t position_ = 0;
  std::uint64_t line_offset_ = 0;
  char* buffer_ = nullptr;
  std::size_t capacity_ = 0;
  ExecStats* stats_;
};

// 1-based line number of the line starting at `offset`.
std::uint64_t line_number_at(const std::string& path, std::uint64_t offset);

// Parses one line of a JSON Lines file. Blank lines and skipped malformed
// lines yield nullopt.
std::optional<Item> parse_record(std::string_view line, const LineReader& reader,
                                 const SourceOptions& options);

PartitionedSequence json_file(std::string_view pattern, std::size_t partitions,
                              const SourceOptions& options);
PartitionedSequence text_file(std::string_view pattern, std::size_t partitions,
                              const SourceOptions& options);

// Schema for annotate: an object mapping field names to type names
// ("integer", "string?", ...), nested objects, or one-element arrays. A
// trailing '?' on the type or the field name marks an optional field.
struct Schema {
  enum class Kind { Atomic, Object, Array };
  Kind kind = Kind::Atomic;
  AtomicType type = AtomicType::String;
  bool optional = false;
  std::vector<std::pair<std::string, Schema>> fields;
  std::shared_ptr<const Schema> element;
};

Schema parse_schema(const Item& schema);

// Coerces one top-level item (1-based `index` for error messages). Fields
// not in the schema are dropped; atomic values of another type are cast to
// the field type; null is kept for atomic fields.
Item annotate_item(const Item& item, const Schema& schema, std::uint64_t index);

PartitionedSequence annotate(const PartitionedSequence& in, const Schema& schema,
                             const WorkerPool& pool);
// One column per top-level field; absent optional fields are empty cells.
TupleFrame annotate_frame(const PartitionedSequence& in, const Schema& schema,
                          const WorkerPool& pool);

}  // namespace jsoniq
