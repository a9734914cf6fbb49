#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jsoniq/aggregate.hpp"
#include "jsoniq/ast.hpp"
#include "jsoniq/item.hpp"
#include "jsoniq/plan.hpp"
#include "jsoniq/shred.hpp"

namespace jsoniq {

using ItemSink = std::function<void(const Item&)>;
// Pushes the items of one partition, in order, into the sink. Producers may
// run on any worker; each call starts from the beginning of the partition.
using ItemProducer = std::function<void(const ItemSink&)>;

// Lazy ordered collection of partitions; concatenating the partitions in
// index order gives the sequence.
struct PartitionedSequence {
  std::vector<ItemProducer> partitions;
};

using Tuple = std::vector<Sequence>;
using TupleSink = std::function<void(Tuple&&)>;
using TupleProducer = std::function<void(const TupleSink&)>;

// Partitioned stream of FLWOR tuples; `columns` gives the variable of each
// tuple position.
struct TupleFrame {
  std::vector<VarId> columns;
  std::vector<std::string> names;  // display names, one per column
  std::vector<TupleProducer> partitions;
};

// Fixed-size OpenMP worker pool.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  int workers() const { return workers_; }

  // Runs task(i) for every i in [0, n) with dynamic scheduling. When tasks
  // fail, the exception of the lowest failing index is rethrown after all
  // started tasks finish; tasks above a known failure are skipped.
  void run(std::size_t n, const std::function<void(std::size_t)>& task) const;

 private:
  int workers_;
};

template <class Fn>
using Factory = std::function<Fn()>;

using MapFn = std::function<void(const Item&, const ItemSink&)>;
using PositionalMapFn = std::function<void(const Item&, std::uint64_t, const ItemSink&)>;
using TupleFn = std::function<Sequence(const Tuple&)>;
using TuplePredicate = std::function<bool(const Tuple&)>;
using TupleEmitFn = std::function<void(const Tuple&, const ItemSink&)>;
using KeyFn = std::function<void(const Tuple&, std::vector<Sequence>&)>;

// Sequence operators.
PartitionedSequence partition_sequence(const Sequence& seq, std::size_t partitions);
PartitionedSequence single_partition(ItemProducer producer);
PartitionedSequence flat_map_items(PartitionedSequence in, Factory<MapFn> make);
// Like flat_map_items but the function also receives the 1-based global
// position. Materializes the input to compute partition offsets.
PartitionedSequence flat_map_positional(const PartitionedSequence& in, Factory<PositionalMapFn> make,
                                        const WorkerPool& pool);
PartitionedSequence concat_partitioned(std::vector<PartitionedSequence> parts);

std::vector<std::vector<Item>> materialize(const PartitionedSequence& in, const WorkerPool& pool);
Sequence collect(const PartitionedSequence& in, const WorkerPool& pool);
std::uint64_t count_items(const PartitionedSequence& in, const WorkerPool& pool);
// Per-partition aggregate states merged in partition order.
AggregateState aggregate_items(const PartitionedSequence& in, AggregateKind kind,
                               const WorkerPool& pool);

// Tuple operators. `carry` selects the input positions copied to the output
// before any new column.
TupleFrame for_frame(const PartitionedSequence& in, const Tuple& prefix, std::vector<VarId> columns);
TupleFrame for_tuples(TupleFrame in, std::vector<VarId> columns, std::vector<std::size_t> carry,
                      Factory<TupleFn> make);
// Cartesian product with a binding that does not depend on the tuple.
TupleFrame for_broadcast(TupleFrame in, std::vector<VarId> columns, std::vector<std::size_t> carry,
                         Sequence values);
TupleFrame let_tuples(TupleFrame in, std::vector<VarId> columns, std::vector<std::size_t> carry,
                      Factory<TupleFn> make);
TupleFrame where_tuples(TupleFrame in, Factory<TuplePredicate> make);
TupleFrame count_tuples(const TupleFrame& in, std::vector<VarId> columns,
                        std::vector<std::size_t> carry, const WorkerPool& pool);
PartitionedSequence return_items(TupleFrame in, Factory<TupleEmitFn> make);

std::vector<std::vector<Tuple>> materialize(const TupleFrame& in, const WorkerPool& pool);

struct GroupKernel {
  Factory<KeyFn> make_keys;
  std::vector<std::size_t> carry;  // non-grouping columns, concatenated per group
  struct Aggregate {
    std::size_t column;
    AggregateKind kind;
  };
  std::vector<Aggregate> aggregates;
  NullOrder null_order = NullOrder::Before;
  std::vector<VarId> columns;
  std::size_t out_partitions = 1;
};

// Hash pre-aggregation per partition, merge in partition order, groups
// sorted by shredded key. Output: carried columns, key values, then a
// (value, error) column pair per aggregate.
TupleFrame group_tuples(const TupleFrame& in, const GroupKernel& kernel, const WorkerPool& pool);

struct OrderKernel {
  Factory<KeyFn> make_keys;
  std::vector<OrderKey> keys;
  NullOrder null_order = NullOrder::Before;
};

// Type check over all keys, stable sort per partition, then a k-way merge
// that breaks ties by partition index. Equivalent to a global stable sort.
TupleFrame order_tuples(const TupleFrame& in, const OrderKernel& kernel, const WorkerPool& pool);

// Cell layout of an aggregate error column: empty, or (code name, message).
Sequence encode_error(const QueryError& error);
void rethrow_encoded(const Sequence& cell);

}  // namespace jsoniq
