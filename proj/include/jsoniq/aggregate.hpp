#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jsoniq/decimal.hpp"
#include "jsoniq/errors.hpp"
#include "jsoniq/item.hpp"
#include "jsoniq/plan.hpp"

namespace jsoniq {

// Correctly rounded sum of doubles kept as non-overlapping partials, so the
// result does not depend on the order of additions.
class ExactDoubleSum {
 public:
  void add(double value);
  void merge(const ExactDoubleSum& other);
  double value() const;

 private:
  std::vector<double> partials_;
  bool nan_ = false;
  bool pos_inf_ = false;
  bool neg_inf_ = false;
};

// Mergeable partial state of count/sum/avg/min/max. Errors are recorded
// rather than thrown so they surface only when the result is read. Merging
// a state built from a later slice of the input gives the same result as
// feeding both slices in order.
class AggregateState {
 public:
  explicit AggregateState(AggregateKind kind) : kind_(kind) {}

  void add(const Item& item);
  void add_all(const Sequence& seq) {
    for (const Item& item : seq) add(item);
  }
  void merge(const AggregateState& later);

  // Throws the recorded error, if any.
  Sequence result() const;
  const std::optional<QueryError>& error() const { return error_; }
  AggregateKind kind() const { return kind_; }

 private:
  void add_number(const Item& item);
  void consider(const Item& item);

  AggregateKind kind_;
  std::optional<QueryError> error_;
  std::uint64_t count_ = 0;
  Decimal exact_;
  ExactDoubleSum doubles_;
  bool saw_decimal_ = false;
  bool saw_double_ = false;
  bool saw_nan_ = false;
  std::optional<Item> best_;
};

}  // namespace jsoniq
