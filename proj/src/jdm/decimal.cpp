#include "jsoniq/decimal.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <vector>

namespace jsoniq {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_odd(const Integer& v) { return bit_test(abs(v), 0); }

// Divides by 10^digits rounding half to even.
Integer round_away_digits(const Integer& value, int digits) {
  if (digits <= 0) return value;
  const Integer divisor = pow10(digits);
  Integer q = value / divisor;
  Integer r = value % divisor;
  if (r.is_zero()) return q;
  Integer twice = abs(r) * 2;
  int cmp = twice.compare(divisor);
  if (cmp > 0 || (cmp == 0 && is_odd(q))) {
    q += value.sign() < 0 ? -1 : 1;
  }
  return q;
}

}  // namespace

Integer pow10(int exponent) {
  static std::once_flag once;
  static std::vector<Integer> table;
  std::call_once(once, [] {
    table.reserve(128);
    Integer v = 1;
    for (int i = 0; i < 128; ++i) {
      table.push_back(v);
      v *= 10;
    }
  });
  if (exponent < static_cast<int>(table.size())) return table[exponent];
  Integer v = table.back();
  for (int i = static_cast<int>(table.size()) - 1; i < exponent; ++i) v *= 10;
  return v;
}

std::optional<Integer> parse_integer(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string_view digits = text.substr(pos);
  if (digits.empty()) return std::nullopt;
  for (char c : digits) {
    if (!is_digit(c)) return std::nullopt;
  }
  // A leading zero would select octal in the boost string constructor.
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  if (digits.size() <= 18) {
    std::int64_t v = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), v);
    return Integer(negative ? -v : v);
  }
  Integer v{std::string(digits)};
  return negative ? Integer(-v) : v;
}

std::string integer_to_string(const Integer& value) { return value.str(); }

double integer_to_double(const Integer& value) {
  if (value.is_zero()) return 0.0;
  if (msb(abs(value)) < 62) return static_cast<double>(value.convert_to<std::int64_t>());
  return std::strtod(value.str().c_str(), nullptr);
}

Decimal::Decimal(Integer unscaled, int scale)
    : unscaled_(std::move(unscaled)), scale_(scale) {
  if (scale_ < 0) {
    unscaled_ *= pow10(-scale_);
    scale_ = 0;
  }
  if (scale_ > kMaxScale) {
    unscaled_ = round_away_digits(unscaled_, scale_ - kMaxScale);
    scale_ = kMaxScale;
  }
  if (unscaled_.is_zero()) {
    scale_ = 0;
    return;
  }
  while (scale_ > 0) {
    Integer q, r;
    divide_qr(unscaled_, Integer(10), q, r);
    if (!r.is_zero()) break;
    unscaled_ = std::move(q);
    --scale_;
  }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  int scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (is_digit(c)) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      return std::nullopt;
    }
  }
  if (!any_digit) return std::nullopt;
  Integer unscaled = *parse_integer(digits);
  if (negative) unscaled = -unscaled;
  return Decimal(std::move(unscaled), scale);
}

std::optional<Decimal> Decimal::from_double(double value) {
  if (!std::isfinite(value)) return std::nullopt;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value,
                           std::chars_format::scientific);
  std::string_view text(buf, res.ptr - buf);
  auto e = text.find('e');
  std::string_view mantissa = text.substr(0, e);
  int exponent = 0;
  std::from_chars(text.data() + e + 1 + (text[e + 1] == '+' ? 1 : 0),
                  text.data() + text.size(), exponent);
  auto m = parse(mantissa);
  if (!m) return std::nullopt;
  return Decimal(m->unscaled_, m->scale_ - exponent);
}

std::string Decimal::to_string() const {
  std::string digits = abs(unscaled_).str();
  if (scale_ == 0) {
    digits += ".0";
  } else {
    if (static_cast<int>(digits.size()) <= scale_) {
      digits.insert(0, scale_ + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - scale_, 1, '.');
  }
  if (unscaled_.sign() < 0) digits.insert(0, 1, '-');
  return digits;
}

double Decimal::to_double() const {
  if (scale_ == 0) return integer_to_double(unscaled_);
  return std::strtod(to_string().c_str(), nullptr);
}

Integer Decimal::truncate() const {
  if (scale_ == 0) return unscaled_;
  return unscaled_ / pow10(scale_);
}

Integer Decimal::floor() const {
  if (scale_ == 0) return unscaled_;
  Integer q, r;
  divide_qr(unscaled_, pow10(scale_), q, r);
  if (r.sign() < 0) q -= 1;
  return q;
}

Integer Decimal::ceiling() const {
  if (scale_ == 0) return unscaled_;
  Integer q, r;
  divide_qr(unscaled_, pow10(scale_), q, r);
  if (r.sign() > 0) q += 1;
  return q;
}

Integer Decimal::round_half_up() const {
  return (*this + Decimal(Integer(5), 1)).floor();
}

Decimal operator+(const Decimal& a, const Decimal& b) {
  if (a.scale_ == b.scale_) return {a.unscaled_ + b.unscaled_, a.scale_};
  if (a.scale_ < b.scale_) {
    return {a.unscaled_ * pow10(b.scale_ - a.scale_) + b.unscaled_, b.scale_};
  }
  return {a.unscaled_ + b.unscaled_ * pow10(a.scale_ - b.scale_), a.scale_};
}

Decimal operator-(const Decimal& a, const Decimal& b) { return a + (-b); }

Decimal operator*(const Decimal& a, const Decimal& b) {
  return {a.unscaled_ * b.unscaled_, a.scale_ + b.scale_};
}

Decimal Decimal::divide(const Decimal& a, const Decimal& b) {
  const int shift = kMaxScale - a.scale_ + b.scale_;
  Integer numerator = a.unscaled_ * pow10(shift);
  Integer q, r;
  divide_qr(numerator, b.unscaled_, q, r);
  if (!r.is_zero()) {
    int cmp = Integer(abs(r) * 2).compare(abs(b.unscaled_));
    if (cmp > 0 || (cmp == 0 && is_odd(q))) {
      q += (numerator.sign() * b.unscaled_.sign()) < 0 ? -1 : 1;
    }
  }
  return {std::move(q), kMaxScale};
}

Decimal Decimal::remainder(const Decimal& a, const Decimal& b) {
  const int scale = std::max(a.scale_, b.scale_);
  Integer lhs = a.unscaled_ * pow10(scale - a.scale_);
  Integer rhs = b.unscaled_ * pow10(scale - b.scale_);
  return {lhs % rhs, scale};
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  int cmp;
  if (a.scale_ == b.scale_) {
    cmp = a.unscaled_.compare(b.unscaled_);
  } else if (a.scale_ < b.scale_) {
    cmp = Integer(a.unscaled_ * pow10(b.scale_ - a.scale_)).compare(b.unscaled_);
  } else {
    cmp = a.unscaled_.compare(Integer(b.unscaled_ * pow10(a.scale_ - b.scale_)));
  }
  return cmp <=> 0;
}

std::strong_ordering compare_exact(const Integer& unscaled, int scale,
                                   double value) {
  if (value == 0.0) return unscaled.sign() <=> 0;
  int exp2 = 0;
  double frac = std::frexp(value, &exp2);
  // value == mantissa * 2^(exp2 - 53)
  Integer mantissa(static_cast<std::int64_t>(std::ldexp(frac, 53)));
  int shift = exp2 - 53;
  Integer lhs = unscaled;
  Integer rhs = mantissa * pow10(scale);
  if (shift >= 0) {
    rhs <<= shift;
  } else {
    lhs <<= -shift;
  }
  return lhs.compare(rhs) <=> 0;
}

}  // namespace jsoniq
