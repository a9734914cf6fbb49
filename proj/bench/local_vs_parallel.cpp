#include <benchmark/benchmark.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <unistd.h>

#include "jsoniq/engine.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kRecords = 200000;

// Weather-shaped records written once per process and removed at exit.
class Dataset {
 public:
  Dataset() {
    path_ = fs::temp_directory_path() / ("jsoniq-bench-" + std::to_string(::getpid()) + ".jsonl");
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> station(0, 399), year(2000, 2006), month(1, 12), day(1, 28),
        type(0, 3), value(-300, 450);
    static const char* types[] = {"TMAX", "TMIN", "PRCP", "SNOW"};
    std::ofstream out(path_);
    char date[16];
    for (int i = 0; i < kRecords; ++i) {
      std::snprintf(date, sizeof date, "%04d-%02d-%02d", year(rng), month(rng), day(rng));
      out << "{\"data\":{\"date\":\"" << date << "\",\"value\":" << value(rng) << ",\"dataType\":\""
          << types[type(rng)] << "\",\"station\":\"GHCND:US" << 10000 + station(rng) << "\"}}\n";
    }
  }
  ~Dataset() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  std::string source() const { return "json-file(\"" + path_.string() + "\")"; }

 private:
  fs::path path_;
};

const Dataset& dataset() {
  static Dataset d;
  return d;
}

std::string count_query() { return "count(" + dataset().source() + ")"; }

std::string group_query() {
  return "for $r in " + dataset().source() +
         " group by $s := $r.data.station return {\"station\": $s, \"n\": count($r), \"avg\": avg($r.data.value)}";
}

std::string order_query() {
  return "count(for $r in " + dataset().source() +
         " order by $r.data.value descending, $r.data.date return $r.data.station)";
}

// Arg 0 selects the serial reference, arg 1 the parallel engine.
void run_query(benchmark::State& state, const std::string& query) {
  jsoniq::EngineConfig config;
  config.force_local = state.range(0) == 0;
  jsoniq::Engine engine(config);
  auto compiled = engine.compile(query);
  std::size_t items = 0;
  for (auto _ : state) {
    auto result = engine.execute(compiled);
    items = result.size();
    benchmark::DoNotOptimize(items);
  }
  state.SetItemsProcessed(state.iterations() * kRecords);
  state.SetLabel(config.force_local ? "local" : "parallel x" + std::to_string(config.workers));
}

void BM_Count(benchmark::State& state) { run_query(state, count_query()); }
void BM_GroupBy(benchmark::State& state) { run_query(state, group_query()); }
void BM_OrderBy(benchmark::State& state) { run_query(state, order_query()); }

BENCHMARK(BM_Count)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GroupBy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrderBy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
