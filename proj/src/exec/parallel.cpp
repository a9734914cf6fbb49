#include "jsoniq/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <queue>
#include <unordered_map>

#include "jsoniq/atomic.hpp"

namespace jsoniq {

WorkerPool::WorkerPool(int workers) : workers_(std::max(1, workers)) {}

void WorkerPool::run(std::size_t n, const std::function<void(std::size_t)>& task) const {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> first_failed{n};
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers_) if (workers_ > 1 && n > 1)
  for (long i = 0; i < count; ++i) {
    auto index = static_cast<std::size_t>(i);
    if (index > first_failed.load(std::memory_order_relaxed)) continue;
    try {
      task(index);
    } catch (...) {
      errors[index] = std::current_exception();
      std::size_t seen = first_failed.load();
      while (index < seen && !first_failed.compare_exchange_weak(seen, index)) {
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

Tuple pick(const Tuple& t, const std::vector<std::size_t>& carry) {
  Tuple out;
  out.reserve(carry.size() + 1);
  for (std::size_t i : carry) out.push_back(t[i]);
  return out;
}

std::vector<std::uint64_t> offsets_of(const std::vector<std::size_t>& sizes) {
  std::vector<std::uint64_t> offsets(sizes.size(), 0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    offsets[i] = total;
    total += sizes[i];
  }
  return offsets;
}

// Contiguous chunk boundaries of n elements over p partitions.
std::vector<std::size_t> chunk_bounds(std::size_t n, std::size_t p) {
  p = std::max<std::size_t>(1, p);
  std::vector<std::size_t> bounds(p + 1, 0);
  for (std::size_t i = 0; i <= p; ++i) bounds[i] = n * i / p;
  return bounds;
}

template <class T>
std::vector<TupleProducer> replay_chunks(std::shared_ptr<const std::vector<T>> rows,
                                         std::size_t partitions,
                                         std::function<Tuple(const T&)> build) {
  std::vector<TupleProducer> out;
  auto bounds = chunk_bounds(rows->size(), partitions);
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    std::size_t lo = bounds[p], hi = bounds[p + 1];
    out.push_back([rows, lo, hi, build](const TupleSink& sink) {
      for (std::size_t i = lo; i < hi; ++i) sink(build((*rows)[i]));
    });
  }
  return out;
}

}  // namespace

PartitionedSequence partition_sequence(const Sequence& seq, std::size_t partitions) {
  PartitionedSequence out;
  auto bounds = chunk_bounds(seq.size(), partitions);
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    std::size_t lo = bounds[p], hi = bounds[p + 1];
    out.partitions.push_back([seq, lo, hi](const ItemSink& sink) {
      for (std::size_t i = lo; i < hi; ++i) sink(seq[i]);
    });
  }
  return out;
}

PartitionedSequence single_partition(ItemProducer producer) {
  PartitionedSequence out;
  out.partitions.push_back(std::move(producer));
  return out;
}

PartitionedSequence flat_map_items(PartitionedSequence in, Factory<MapFn> make) {
  PartitionedSequence out;
  for (auto& p : in.partitions) {
    out.partitions.push_back([p = std::move(p), make](const ItemSink& sink) {
      MapFn fn = make();
      p([&](const Item& item) { fn(item, sink); });
    });
  }
  return out;
}

PartitionedSequence flat_map_positional(const PartitionedSequence& in,
                                        Factory<PositionalMapFn> make, const WorkerPool& pool) {
  auto parts = std::make_shared<std::vector<std::vector<Item>>>(materialize(in, pool));
  std::vector<std::size_t> sizes;
  for (const auto& p : *parts) sizes.push_back(p.size());
  auto offsets = offsets_of(sizes);
  PartitionedSequence out;
  for (std::size_t i = 0; i < parts->size(); ++i) {
    std::uint64_t base = offsets[i];
    out.partitions.push_back([parts, i, base, make](const ItemSink& sink) {
      PositionalMapFn fn = make();
      const auto& items = (*parts)[i];
      for (std::size_t k = 0; k < items.size(); ++k) fn(items[k], base + k + 1, sink);
    });
  }
  return out;
}

PartitionedSequence concat_partitioned(std::vector<PartitionedSequence> parts) {
  PartitionedSequence out;
  for (auto& p : parts) {
    for (auto& producer : p.partitions) out.partitions.push_back(std::move(producer));
  }
  return out;
}

std::vector<std::vector<Item>> materialize(const PartitionedSequence& in, const WorkerPool& pool) {
  std::vector<std::vector<Item>> parts(in.partitions.size());
  pool.run(parts.size(), [&](std::size_t i) {
    in.partitions[i]([&](const Item& item) { parts[i].push_back(item); });
  });
  return parts;
}

Sequence collect(const PartitionedSequence& in, const WorkerPool& pool) {
  auto parts = materialize(in, pool);
  if (parts.size() == 1) return Sequence(std::move(parts[0]));
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<Item> items;
  items.reserve(total);
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(items));
  return Sequence(std::move(items));
}

std::uint64_t count_items(const PartitionedSequence& in, const WorkerPool& pool) {
  std::vector<std::uint64_t> counts(in.partitions.size(), 0);
  pool.run(counts.size(), [&](std::size_t i) {
    in.partitions[i]([&](const Item&) { ++counts[i]; });
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

AggregateState aggregate_items(const PartitionedSequence& in, AggregateKind kind,
                               const WorkerPool& pool) {
  std::vector<AggregateState> states(in.partitions.size(), AggregateState(kind));
  pool.run(states.size(), [&](std::size_t i) {
    in.partitions[i]([&](const Item& item) { states[i].add(item); });
  });
  AggregateState total(kind);
  for (const auto& s : states) total.merge(s);
  return total;
}

TupleFrame for_frame(const PartitionedSequence& in, const Tuple& prefix, std::vector<VarId> columns) {
  TupleFrame out;
  out.columns = std::move(columns);
  for (const auto& p : in.partitions) {
    out.partitions.push_back([p, prefix](const TupleSink& sink) {
      p([&](const Item& item) {
        Tuple t = prefix;
        t.emplace_back(item);
        sink(std::move(t));
      });
    });
  }
  return out;
}

TupleFrame for_tuples(TupleFrame in, std::vector<VarId> columns, std::vector<std::size_t> carry,
                      Factory<TupleFn> make) {
  TupleFrame out;
  out.columns = std::move(columns);
  for (auto& p : in.partitions) {
    out.partitions.push_back([p = std::move(p), carry, make](const TupleSink& sink) {
      TupleFn fn = make();
      p([&](Tuple&& t) {
        Sequence values = fn(t);
        for (const Item& item : values) {
          Tuple next = pick(t, carry);
          next.emplace_back(item);
          sink(std::move(next));
        }
      });
    });
  }
  return out;
}

TupleFrame for_broadcast(TupleFrame in, std::vector<VarId> columns, std::vector<std::size_t> carry,
                         Sequence values) {
  TupleFrame out;
  out.columns = std::move(columns);
  for (auto& p : in.partitions) {
    out.partitions.push_back([p = std::move(p), carry, values](const TupleSink& sink) {
      p([&](Tuple&& t) {
        for (const Item& item : values) {
          Tuple next = pick(t, carry);
          next.emplace_back(item);
          sink(std::move(next));
        }
      });
    });
  }
  return out;
}

TupleFrame let_tuples(TupleFrame in, std::vector<VarId> columns, std::vector<std::size_t> carry,
                      Factory<TupleFn> make) {
  TupleFrame out;
  out.columns = std::move(columns);
  for (auto& p : in.partitions) {
    out.partitions.push_back([p = std::move(p), carry, make](const TupleSink& sink) {
      TupleFn fn = make();
      p([&](Tuple&& t) {
        Tuple next = pick(t, carry);
        next.push_back(fn(t));
        sink(std::move(next));
      });
    });
  }
  return out;
}

TupleFrame where_tuples(TupleFrame in, Factory<TuplePredicate> make) {
  TupleFrame out;
  out.columns = in.columns;
  for (auto& p : in.partitions) {
    out.partitions.push_back([p = std::move(p), make](const TupleSink& sink) {
      TuplePredicate keep = make();
      p([&](Tuple&& t) {
        if (keep(t)) sink(std::move(t));
      });
    });
  }
  return out;
}

TupleFrame count_tuples(const TupleFrame& in, std::vector<VarId> columns,
                        std::vector<std::size_t> carry, const WorkerPool& pool) {
  auto parts = std::make_shared<std::vector<std::vector<Tuple>>>(materialize(in, pool));
  std::vector<std::size_t> sizes;
  for (const auto& p : *parts) sizes.push_back(p.size());
  auto offsets = offsets_of(sizes);
  TupleFrame out;
  out.columns = std::move(columns);
  for (std::size_t i = 0; i < parts->size(); ++i) {
    std::uint64_t base = offsets[i];
    out.partitions.push_back([parts, i, base, carry](const TupleSink& sink) {
      const auto& rows = (*parts)[i];
      for (std::size_t k = 0; k < rows.size(); ++k) {
        Tuple next = pick(rows[k], carry);
        next.emplace_back(Item::integer(static_cast<std::int64_t>(base + k + 1)));
        sink(std::move(next));
      }
    });
  }
  return out;
}

PartitionedSequence return_items(TupleFrame in, Factory<TupleEmitFn> make) {
  PartitionedSequence out;
  for (auto& p : in.partitions) {
    out.partitions.push_back([p = std::move(p), make](const ItemSink& sink) {
      TupleEmitFn fn = make();
      p([&](Tuple&& t) { fn(t, sink); });
    });
  }
  return out;
}

std::vector<std::vector<Tuple>> materialize(const TupleFrame& in, const WorkerPool& pool) {
  std::vector<std::vector<Tuple>> parts(in.partitions.size());
  pool.run(parts.size(), [&](std::size_t i) {
    in.partitions[i]([&](Tuple&& t) { parts[i].push_back(std::move(t)); });
  });
  return parts;
}

Sequence encode_error(const QueryError& error) {
  return Sequence{Item::string(std::string(error_code_name(error.code()))),
                  Item::string(error.message())};
}

void rethrow_encoded(const Sequence& cell) {
  if (cell.empty()) return;
  ErrorCode code = ErrorCode::TypeError;
  error_code_from_name(cell[0].as_string(), code);
  throw QueryError(code, cell[1].as_string());
}

// ---------------------------------------------------------------- group by

namespace {

struct KeyVectorHash {
  std::size_t operator()(const std::vector<ShreddedKey>& keys) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& k : keys) h = (h ^ k.hash()) * 0x100000001b3ull;
    return h;
  }
};

int compare_keys(const std::vector<ShreddedKey>& a, const std::vector<ShreddedKey>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

struct Group {
  std::vector<ShreddedKey> shredded;
  std::vector<Sequence> key_values;
  std::vector<std::vector<Item>> columns;
  std::vector<AggregateState> aggregates;
};

struct GroupTable {
  std::unordered_map<std::vector<ShreddedKey>, std::size_t, KeyVectorHash> index;
  std::vector<Group> groups;  // first-appearance order

  Group& find_or_add(std::vector<ShreddedKey>&& shredded, bool& added) {
    auto it = index.find(shredded);
    added = it == index.end();
    if (!added) return groups[it->second];
    index.emplace(shredded, groups.size());
    groups.push_back(Group{std::move(shredded), {}, {}, {}});
    return groups.back();
  }
};

}  // namespace

TupleFrame group_tuples(const TupleFrame& in, const GroupKernel& kernel, const WorkerPool& pool) {
  std::vector<GroupTable> tables(in.partitions.size());
  pool.run(tables.size(), [&](std::size_t i) {
    KeyFn keys_of = kernel.make_keys();
    std::vector<Sequence> keys;
    GroupTable& table = tables[i];
    in.partitions[i]([&](Tuple&& t) {
      keys.clear();
      keys_of(t, keys);
      std::vector<ShreddedKey> shredded;
      shredded.reserve(keys.size());
      for (const auto& k : keys) shredded.push_back(shred_group_key(k, kernel.null_order));
      bool added = false;
      Group& g = table.find_or_add(std::move(shredded), added);
      if (added) {
        g.key_values = keys;
        g.columns.resize(kernel.carry.size());
        for (const auto& a : kernel.aggregates) g.aggregates.emplace_back(a.kind);
      }
      for (std::size_t c = 0; c < kernel.carry.size(); ++c) {
        const Sequence& cell = t[kernel.carry[c]];
        g.columns[c].insert(g.columns[c].end(), cell.begin(), cell.end());
      }
      for (std::size_t a = 0; a < kernel.aggregates.size(); ++a) {
        g.aggregates[a].add_all(t[kernel.aggregates[a].column]);
      }
    });
  });

  GroupTable merged;
  for (auto& table : tables) {
    for (auto& g : table.groups) {
      bool added = false;
      std::vector<ShreddedKey> key = g.shredded;
      Group& target = merged.find_or_add(std::move(key), added);
      if (added) {
        target = std::move(g);
        continue;
      }
      for (std::size_t c = 0; c < target.columns.size(); ++c) {
        auto& dst = target.columns[c];
        std::move(g.columns[c].begin(), g.columns[c].end(), std::back_inserter(dst));
      }
      for (std::size_t a = 0; a < target.aggregates.size(); ++a) {
        target.aggregates[a].merge(g.aggregates[a]);
      }
    }
    table = GroupTable{};
  }
  auto groups = std::make_shared<std::vector<Group>>(std::move(merged.groups));
  std::sort(groups->begin(), groups->end(), [](const Group& a, const Group& b) {
    return compare_keys(a.shredded, b.shredded) < 0;
  });

  TupleFrame out;
  out.columns = kernel.columns;
  out.partitions = replay_chunks<Group>(groups, kernel.out_partitions, [](const Group& g) {
    Tuple t;
    t.reserve(g.columns.size() + g.key_values.size() + 2 * g.aggregates.size());
    for (const auto& c : g.columns) t.emplace_back(c);
    for (const auto& k : g.key_values) t.push_back(k);
    for (const auto& a : g.aggregates) {
      if (a.error()) {
        t.emplace_back();
        t.push_back(encode_error(*a.error()));
      } else {
        t.push_back(a.result());
        t.emplace_back();
      }
    }
    return t;
  });
  return out;
}

// ---------------------------------------------------------------- order by

namespace {

enum class KeyClass { None = -1, Number, String, Boolean };

const char* key_class_name(KeyClass c) {
  switch (c) {
    case KeyClass::Number: return "number";
    case KeyClass::String: return "string";
    case KeyClass::Boolean: return "boolean";
    default: return "none";
  }
}

KeyClass key_class(const Sequence& cell) {
  if (cell.empty() || cell[0].is_null()) return KeyClass::None;
  if (cell[0].is_numeric()) return KeyClass::Number;
  if (cell[0].is_string()) return KeyClass::String;
  return KeyClass::Boolean;
}

// First class seen and the first class that differs from it, in input order.
struct ClassSummary {
  KeyClass first = KeyClass::None;
  KeyClass conflict = KeyClass::None;

  void add(KeyClass c) {
    if (c == KeyClass::None) return;
    if (first == KeyClass::None) first = c;
    else if (c != first && conflict == KeyClass::None) conflict = c;
  }
};

struct Row {
  std::vector<Sequence> keys;
  Tuple tuple;
};

bool is_nan(const Item& v) { return v.is_double() && std::isnan(v.as_double()); }

int rank(const Sequence& cell, const OrderKey& key, NullOrder nulls) {
  if (cell.empty()) return key.empty_greatest ? 4 : 0;
  if (cell[0].is_null()) return nulls == NullOrder::After ? 3 : 1;
  return 2;
}

int compare_cell(const Sequence& a, const Sequence& b, const OrderKey& key, NullOrder nulls) {
  int ra = rank(a, key, nulls), rb = rank(b, key, nulls);
  int c = 0;
  if (ra != rb) {
    c = ra < rb ? -1 : 1;
  } else if (ra == 2) {
    const Item& x = a[0];
    const Item& y = b[0];
    bool xn = is_nan(x), yn = is_nan(y);
    if (xn || yn) {
      c = xn == yn ? 0 : (xn ? 1 : -1);
    } else if (x.is_boolean()) {
      c = static_cast<int>(x.as_boolean()) - static_cast<int>(y.as_boolean());
    } else {
      c = three_way_compare(x, y).value_or(0);
    }
  }
  return key.descending ? -c : c;
}

}  // namespace

TupleFrame order_tuples(const TupleFrame& in, const OrderKernel& kernel, const WorkerPool& pool) {
  const std::size_t nkeys = kernel.keys.size();
  std::vector<std::vector<Row>> parts(in.partitions.size());
  std::vector<std::vector<ClassSummary>> summaries(parts.size(), std::vector<ClassSummary>(nkeys));
  pool.run(parts.size(), [&](std::size_t i) {
    KeyFn keys_of = kernel.make_keys();
    in.partitions[i]([&](Tuple&& t) {
      Row row;
      keys_of(t, row.keys);
      for (std::size_t k = 0; k < nkeys; ++k) {
        const Sequence& cell = row.keys[k];
        if (cell.size() > 1) {
          throw QueryError(ErrorCode::MultiItemKeyError,
                           "order by key '" + kernel.keys[k].text + "' evaluated to " +
                               std::to_string(cell.size()) + " items");
        }
        if (cell.size() == 1 && !cell[0].is_atomic()) {
          throw QueryError(ErrorCode::NonatomicKeyError,
                           "order by key '" + kernel.keys[k].text + "' evaluated to an " +
                               std::string(item_type_name(cell[0].type())));
        }
        summaries[i][k].add(key_class(cell));
      }
      row.tuple = std::move(t);
      parts[i].push_back(std::move(row));
    });
  });

  for (std::size_t k = 0; k < nkeys; ++k) {
    ClassSummary total;
    for (const auto& s : summaries) {
      total.add(s[k].first);
      total.add(s[k].conflict);
    }
    if (total.conflict != KeyClass::None) {
      throw QueryError(ErrorCode::OrderIncomparable,
                       "order by key '" + kernel.keys[k].text + "' mixes " +
                           key_class_name(total.first) + " and " +
                           key_class_name(total.conflict) + " values");
    }
  }

  auto less = [&](const Row& a, const Row& b) {
    for (std::size_t k = 0; k < nkeys; ++k) {
      int c = compare_cell(a.keys[k], b.keys[k], kernel.keys[k], kernel.null_order);
      if (c != 0) return c < 0;
    }
    return false;
  };
  pool.run(parts.size(), [&](std::size_t i) {
    std::stable_sort(parts[i].begin(), parts[i].end(), less);
  });

  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  auto sorted = std::make_shared<std::vector<Tuple>>();
  sorted->reserve(total);
  using Head = std::pair<std::size_t, std::size_t>;  // (partition, position)
  auto after = [&](const Head& a, const Head& b) {
    const Row& ra = parts[a.first][a.second];
    const Row& rb = parts[b.first][b.second];
    if (less(rb, ra)) return true;
    if (less(ra, rb)) return false;
    return a.first > b.first;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(after)> heap(after);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i].empty()) heap.push({i, 0});
  }
  while (!heap.empty()) {
    Head h = heap.top();
    heap.pop();
    sorted->push_back(std::move(parts[h.first][h.second].tuple));
    if (h.second + 1 < parts[h.first].size()) heap.push({h.first, h.second + 1});
  }

  TupleFrame out;
  out.columns = in.columns;
  out.names = in.names;
  out.partitions = replay_chunks<Tuple>(sorted, std::max<std::size_t>(1, in.partitions.size()),
                                        [](const Tuple& t) { return t; });
  return out;
}

}  // namespace jsoniq
