#include <fnmatch.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <system_error>

#include "jsoniq/io.hpp"
#include "jsoniq/json.hpp"

namespace fs = std::filesystem;

namespace jsoniq {

namespace {

bool has_wildcard(std::string_view s) { return s.find_first_of("*?[") != std::string_view::npos; }

std::vector<std::string> regular_files_in(const fs::path& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    std::string name = entry.path().filename().string();
    if (name.empty() || name[0] == '.' || name[0] == '_') continue;
    if (entry.is_regular_file(ec)) out.push_back(entry.path().string());
  }
  if (ec) throw QueryError(ErrorCode::IoError, "cannot list directory " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> expand_pattern(std::string_view pattern) {
  if (pattern.empty()) throw QueryError(ErrorCode::InvalidArgument, "empty path pattern");
  std::error_code ec;
  if (!has_wildcard(pattern)) {
    fs::path p{std::string(pattern)};
    if (fs::is_directory(p, ec)) return regular_files_in(p);
    if (fs::is_regular_file(p, ec)) return {p.string()};
    throw QueryError(ErrorCode::IoError, "no such file: " + std::string(pattern));
  }
  fs::path full{std::string(pattern)};
  std::vector<fs::path> current{full.is_absolute() ? full.root_path() : fs::path()};
  for (const auto& part : full.relative_path()) {
    std::string comp = part.string();
    std::vector<fs::path> next;
    for (const auto& base : current) {
      if (!has_wildcard(comp)) {
        next.push_back(base / comp);
        continue;
      }
      fs::path dir = base.empty() ? fs::path(".") : base;
      if (!fs::is_directory(dir, ec)) continue;
      for (const auto& entry : fs::directory_iterator(dir, ec)) {
        std::string name = entry.path().filename().string();
        if (fnmatch(comp.c_str(), name.c_str(), FNM_PERIOD) == 0) next.push_back(base / name);
      }
    }
    current = std::move(next);
  }
  std::vector<std::string> out;
  for (const auto& p : current) {
    if (fs::is_regular_file(p, ec)) out.push_back(p.string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<FileRange>> split_files(const std::vector<std::string>& files,
                                                std::size_t partitions) {
  partitions = std::max<std::size_t>(1, partitions);
  std::vector<std::uint64_t> sizes;
  std::uint64_t total = 0;
  for (const auto& f : files) {
    std::error_code ec;
    std::uint64_t size = fs::file_size(f, ec);
    if (ec) throw QueryError(ErrorCode::IoError, "cannot stat " + f + ": " + ec.message());
    sizes.push_back(size);
    total += size;
  }
  std::vector<std::vector<FileRange>> out(partitions);
  for (std::size_t p = 0; p < partitions; ++p) {
    std::uint64_t lo = total * p / partitions;
    std::uint64_t hi = total * (p + 1) / partitions;
    std::uint64_t file_start = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::uint64_t file_end = file_start + sizes[i];
      std::uint64_t b = std::max(lo, file_start), e = std::min(hi, file_end);
      if (b < e) out[p].push_back({files[i], b - file_start, e - file_start});
      file_start = file_end;
    }
  }
  return out;
}

LineReader::LineReader(std::vector<FileRange> ranges, ExecStats* stats)
    : ranges_(std::move(ranges)), stats_(stats) {}

LineReader::~LineReader() {
  if (file_) std::fclose(file_);
  std::free(buffer_);
}

const std::string& LineReader::path() const {
  static const std::string none;
  return current_ < ranges_.size() ? ranges_[current_].path : none;
}

bool LineReader::open_next() {
  if (file_) {
    std::fclose(file_);
    file_ = nullptr;
    ++current_;
  }
  if (!started_) {
    started_ = true;
    current_ = 0;
  }
  while (current_ < ranges_.size()) {
    const FileRange& r = ranges_[current_];
    file_ = std::fopen(r.path.c_str(), "rb");
    if (!file_) throw QueryError(ErrorCode::IoError, "cannot open " + r.path);
    if (stats_) stats_->record_open(r.path);
    position_ = r.begin;
    if (r.begin > 0) {
      // Skip the tail of a line that started in the previous range.
      std::fseek(file_, static_cast<long>(r.begin - 1), SEEK_SET);
      int prev = std::fgetc(file_);
      if (prev != '\n') {
        ssize_t n = ::getline(&buffer_, &capacity_, file_);
        position_ += n > 0 ? static_cast<std::uint64_t>(n) : 0;
      }
    }
    if (position_ < r.end) return true;
    std::fclose(file_);
    file_ = nullptr;
    ++current_;
  }
  return false;
}

bool LineReader::next(std::string_view& line) {
  for (;;) {
    if (!file_ && !open_next()) return false;
    const FileRange& r = ranges_[current_];
    if (position_ < r.end) {
      ssize_t n = ::getline(&buffer_, &capacity_, file_);
      if (n > 0) {
        line_offset_ = position_;
        position_ += static_cast<std::uint64_t>(n);
        std::size_t len = static_cast<std::size_t>(n);
        if (len > 0 && buffer_[len - 1] == '\n') --len;
        if (len > 0 && buffer_[len - 1] == '\r') --len;
        line = std::string_view(buffer_, len);
        if (stats_) stats_->record_lines(1);
        return true;
      }
      if (std::ferror(file_)) throw QueryError(ErrorCode::IoError, "read error in " + r.path);
    }
    if (!open_next()) return false;
  }
}

std::uint64_t line_number_at(const std::string& path, std::uint64_t offset) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return 0;
  std::uint64_t line = 1;
  for (std::uint64_t i = 0; i < offset; ++i) {
    int c = std::fgetc(f);
    if (c == EOF) break;
    if (c == '\n') ++line;
  }
  std::fclose(f);
  return line;
}

std::optional<Item> parse_record(std::string_view line, const LineReader& reader,
                                 const SourceOptions& options) {
  if (line.find_first_not_of(" \t\r") == std::string_view::npos) return std::nullopt;
  try {
    return parse_json_line(line);
  } catch (const QueryError& e) {
    if (e.code() != ErrorCode::JsonParseError) throw;
    if (options.bad_lines == BadLinePolicy::Skip) {
      if (options.stats) options.stats->record_skipped_line();
      return std::nullopt;
    }
    throw QueryError(ErrorCode::JsonParseError,
                     reader.path() + " line " +
                         std::to_string(line_number_at(reader.path(), reader.offset())) + ": " +
                         e.message());
  }
}

namespace {

template <class Emit>
PartitionedSequence line_source(std::string_view pattern, std::size_t partitions,
                                const SourceOptions& options, Emit emit) {
  if (options.stats) options.stats->record_source_call();
  auto files = expand_pattern(pattern);
  PartitionedSequence out;
  for (auto& ranges : split_files(files, partitions)) {
    out.partitions.push_back([ranges, options, emit](const ItemSink& sink) {
      LineReader reader(ranges, options.stats);
      std::string_view line;
      while (reader.next(line)) emit(line, reader, options, sink);
    });
  }
  return out;
}

}  // namespace

PartitionedSequence json_file(std::string_view pattern, std::size_t partitions,
                              const SourceOptions& options) {
  return line_source(pattern, partitions, options,
                     [](std::string_view line, const LineReader& reader,
                        const SourceOptions& opts, const ItemSink& sink) {
                       if (auto item = parse_record(line, reader, opts)) sink(*item);
                     });
}

PartitionedSequence text_file(std::string_view pattern, std::size_t partitions,
                              const SourceOptions& options) {
  return line_source(pattern, partitions, options,
                     [](std::string_view line, const LineReader&, const SourceOptions&,
                        const ItemSink& sink) { sink(Item::string(std::string(line))); });
}

}  // namespace jsoniq
