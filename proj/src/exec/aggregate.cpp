#include "jsoniq/aggregate.hpp"

#include <cmath>
#include <limits>

#include "jsoniq/atomic.hpp"

namespace jsoniq {

void ExactDoubleSum::add(double x) {
  if (std::isnan(x)) {
    nan_ = true;
    return;
  }
  if (std::isinf(x)) {
    (x > 0 ? pos_inf_ : neg_inf_) = true;
    return;
  }
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
    double hi = x + y;
    double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

void ExactDoubleSum::merge(const ExactDoubleSum& other) {
  for (double p : other.partials_) add(p);
  nan_ = nan_ || other.nan_;
  pos_inf_ = pos_inf_ || other.pos_inf_;
  neg_inf_ = neg_inf_ || other.neg_inf_;
}

double ExactDoubleSum::value() const {
  if (nan_ || (pos_inf_ && neg_inf_)) return std::numeric_limits<double>::quiet_NaN();
  if (pos_inf_) return std::numeric_limits<double>::infinity();
  if (neg_inf_) return -std::numeric_limits<double>::infinity();
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    double x = hi;
    double y = partials_[--n];
    hi = x + y;
    double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Half-way case: round using the sign of the remaining partials.
  if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
    double y = lo * 2;
    double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

void AggregateState::add(const Item& item) {
  if (error_) return;
  ++count_;
  switch (kind_) {
    case AggregateKind::Count:
      return;
    case AggregateKind::Sum:
    case AggregateKind::Avg:
      add_number(item);
      return;
    case AggregateKind::Min:
    case AggregateKind::Max:
      consider(item);
      return;
  }
}

void AggregateState::add_number(const Item& item) {
  const char* what = kind_ == AggregateKind::Sum ? "sum" : "avg";
  if (!item.is_numeric()) {
    error_ = QueryError(ErrorCode::TypeError, std::string(what) + "() expects numbers, got " +
                                                  std::string(item_type_name(item.type())));
    return;
  }
  if (item.is_integer()) {
    exact_ = exact_ + Decimal::from_integer(item.as_integer());
  } else if (item.is_decimal()) {
    saw_decimal_ = true;
    exact_ = exact_ + item.as_decimal();
  } else {
    saw_double_ = true;
    doubles_.add(item.as_double());
  }
}

void AggregateState::consider(const Item& item) {
  const char* what = kind_ == AggregateKind::Min ? "min" : "max";
  if (!item.is_atomic()) {
    error_ = QueryError(ErrorCode::TypeError, std::string(what) + "() expects atomic values, got " +
                                                  std::string(item_type_name(item.type())));
    return;
  }
  if (item.is_decimal()) saw_decimal_ = true;
  if (item.is_double()) {
    saw_double_ = true;
    if (std::isnan(item.as_double())) saw_nan_ = true;
  }
  if (!best_) {
    best_ = item;
    return;
  }
  try {
    std::optional<int> cmp = three_way_compare(item, *best_);
    if (!cmp) {
      if (best_->is_double() && std::isnan(best_->as_double())) best_ = item;
      return;
    }
    if (kind_ == AggregateKind::Min ? *cmp < 0 : *cmp > 0) best_ = item;
  } catch (const QueryError&) {
    error_ = QueryError(ErrorCode::TypeError,
                        std::string(what) + "() arguments are not mutually comparable");
  }
}

void AggregateState::merge(const AggregateState& later) {
  if (error_) return;
  if (later.error_ && kind_ != AggregateKind::Min && kind_ != AggregateKind::Max) {
    error_ = later.error_;
    return;
  }
  count_ += later.count_;
  saw_decimal_ = saw_decimal_ || later.saw_decimal_;
  saw_double_ = saw_double_ || later.saw_double_;
  saw_nan_ = saw_nan_ || later.saw_nan_;
  switch (kind_) {
    case AggregateKind::Count:
      return;
    case AggregateKind::Sum:
    case AggregateKind::Avg:
      exact_ = exact_ + later.exact_;
      doubles_.merge(later.doubles_);
      return;
    case AggregateKind::Min:
    case AggregateKind::Max:
      if (later.best_) consider(*later.best_);
      if (!error_ && later.error_) error_ = later.error_;
      return;
  }
}

Sequence AggregateState::result() const {
  if (error_) throw *error_;
  switch (kind_) {
    case AggregateKind::Count:
      return Item::integer(static_cast<std::int64_t>(count_));
    case AggregateKind::Sum:
      if (saw_double_) {
        ExactDoubleSum total = doubles_;
        total.add(exact_.to_double());
        return Item::make_double(total.value());
      }
      if (saw_decimal_) return Item::decimal(exact_);
      return Item::integer(exact_.truncate());
    case AggregateKind::Avg: {
      if (count_ == 0) return {};
      if (saw_double_) {
        ExactDoubleSum total = doubles_;
        total.add(exact_.to_double());
        return Item::make_double(total.value() / static_cast<double>(count_));
      }
      Decimal n = Decimal::from_integer(Integer(count_));
      return Item::decimal(Decimal::divide(exact_, n));
    }
    case AggregateKind::Min:
    case AggregateKind::Max: {
      if (!best_) return {};
      if (saw_nan_) return Item::make_double(std::numeric_limits<double>::quiet_NaN());
      if (!best_->is_numeric()) return *best_;
      if (saw_double_) return cast_item(*best_, AtomicType::Double);
      if (saw_decimal_) return cast_item(*best_, AtomicType::Decimal);
      return *best_;
    }
  }
  return {};
}

}  // namespace jsoniq
