#include "jsoniq/stats.hpp"

namespace jsoniq {

void ExecStats::record_open(const std::string& path) {
  std::lock_guard<std::mutex> lock(mutex_);
  opened_.push_back(path);
}

std::vector<std::string> ExecStats::opened_files() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return opened_;
}

void ExecStats::reset() {
  source_calls_ = 0;
  skipped_lines_ = 0;
  lines_read_ = 0;
  std::lock_guard<std::mutex> lock(mutex_);
  opened_.clear();
}

}  // namespace jsoniq
