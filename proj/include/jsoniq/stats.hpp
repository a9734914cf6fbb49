#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace jsoniq {

// Counters updated by sources during execution. Thread-safe.
class ExecStats {
 public:
  void record_source_call() { source_calls_.fetch_add(1, std::memory_order_relaxed); }
  void record_open(const std::string& path);
  void record_skipped_line() { skipped_lines_.fetch_add(1, std::memory_order_relaxed); }
  void record_lines(std::uint64_t n) { lines_read_.fetch_add(n, std::memory_order_relaxed); }

  std::uint64_t source_calls() const { return source_calls_.load(); }
  std::uint64_t skipped_lines() const { return skipped_lines_.load(); }
  std::uint64_t lines_read() const { return lines_read_.load(); }
  std::vector<std::string> opened_files() const;
  void reset();

 private:
  std::atomic<std::uint64_t> source_calls_{0};
  std::atomic<std::uint64_t> skipped_lines_{0};
  std::atomic<std::uint64_t> lines_read_{0};
  mutable std::mutex mutex_;
  std::vector<std::string> opened_;
};

}  // namespace jsoniq
