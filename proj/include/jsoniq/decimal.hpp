#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace jsoniq {

using Integer = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

std::optional<Integer> parse_integer(std::string_view text);
std::string integer_to_string(const Integer& value);
double integer_to_double(const Integer& value);

// Exact decimal: unscaled * 10^-scale with 0 <= scale <= kMaxScale.
// Kept normalized (no trailing zero digits in the fraction), so structural
// equality is value equality.
class Decimal {
 public:
  static constexpr int kMaxScale = 38;

  Decimal() = default;
  Decimal(Integer unscaled, int scale);

  static Decimal from_integer(const Integer& value) { return {value, 0}; }
  // [+-]?digits[.digits] or [+-]?.digits; fraction digits beyond kMaxScale
  // are rounded half-to-even.
  static std::optional<Decimal> parse(std::string_view text);
  // Shortest decimal that round-trips to the same double; nullopt for
  // NaN/infinity.
  static std::optional<Decimal> from_double(double value);

  const Integer& unscaled() const { return unscaled_; }
  int scale() const { return scale_; }
  int sign() const { return unscaled_.sign(); }
  bool is_zero() const { return unscaled_.is_zero(); }
  bool is_integral() const { return scale_ == 0; }

  // Always contains a '.', e.g. "3.5", "2.0", "-0.25".
  std::string to_string() const;
  double to_double() const;
  Integer truncate() const;
  Integer floor() const;
  Integer ceiling() const;
  // Rounds half toward positive infinity.
  Integer round_half_up() const;

  Decimal operator-() const { return {-unscaled_, scale_}; }
  friend Decimal operator+(const Decimal& a, const Decimal& b);
  friend Decimal operator-(const Decimal& a, const Decimal& b);
  friend Decimal operator*(const Decimal& a, const Decimal& b);
  // Divisor must be non-zero; result rounded half-to-even at kMaxScale.
  static Decimal divide(const Decimal& a, const Decimal& b);
  // a - b * trunc(a / b); divisor must be non-zero.
  static Decimal remainder(const Decimal& a, const Decimal& b);

  friend bool operator==(const Decimal& a, const Decimal& b) = default;
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  Integer unscaled_;
  int scale_ = 0;
};

Integer pow10(int exponent);

// Exact comparison of unscaled*10^-scale against a finite double.
std::strong_ordering compare_exact(const Integer& unscaled, int scale,
                                   double value);

}  // namespace jsoniq
