#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace patrol {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Intermediate
/// products are formed in 128 bits; a result that does not fit back into
/// 64 bits throws std::overflow_error instead of wrapping.
class Rational {
 public:
  using int_type = std::int64_t;

  constexpr Rational() = default;
  constexpr Rational(int_type value) : num_(value) {}  // NOLINT(implicit)
  Rational(int_type num, int_type den) { assign(num, den); }

  int_type num() const { return num_; }
  int_type den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// Largest integer not greater than this value.
  int_type floor() const {
    int_type q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  int_type ceil() const {
    int_type q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) {
      return from_wide(static_cast<wide>(a.num_) + b.num_, a.den_);
    }
    const int_type g = std::gcd(a.den_, b.den_);
    const wide ad = a.den_ / g;
    const wide bd = b.den_ / g;
    return from_wide(a.num_ * bd + b.num_ * ad, ad * b.den_);
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + (-b);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    // Cross-reduce first to keep the 128-bit products small.
    const int_type g1 = std::gcd(a.num_, b.den_);
    const int_type g2 = std::gcd(b.num_, a.den_);
    return from_wide(static_cast<wide>(a.num_ / g1) * (b.num_ / g2),
                     static_cast<wide>(a.den_ / g2) * (b.den_ / g1));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    Rational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
    return a * inv;
  }

  friend bool operator==(const Rational& a, const Rational& b) = default;

  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    return static_cast<wide>(a.num_) * b.den_ <=>
           static_cast<wide>(b.num_) * a.den_;
  }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Exact decimal text when the denominator is of the form 2^a 5^b,
  /// otherwise the "p/q" form.
  std::string decimal_str() const {
    if (den_ == 1) return str();
    int_type d = den_;
    int twos = 0;
    int fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return str();
    const int digits = twos > fives ? twos : fives;
    if (digits > 18) return str();
    wide scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    wide scaled = static_cast<wide>(num_) * (scale / den_);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    const auto int_part = static_cast<std::uint64_t>(scaled / scale);
    auto frac_part = static_cast<std::uint64_t>(scaled % scale);
    std::string frac(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
      frac[static_cast<std::size_t>(i)] = static_cast<char>('0' + frac_part % 10);
      frac_part /= 10;
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    return (negative ? "-" : "") + std::to_string(int_part) + "." + frac;
  }

  /// Parses "p", "p/q", or a plain decimal such as "-0.125" exactly.
  static Rational parse(std::string_view text) {
    auto bad = [&] {
      return std::invalid_argument("not a rational: '" + std::string(text) + "'");
    };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw bad();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(text.substr(0, slash), bad),
                      parse_int(text.substr(slash + 1), bad));
    }

    // Decimal with optional exponent (the shape std::to_chars emits).
    int exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      exponent = static_cast<int>(parse_int(text.substr(e + 1), bad));
      text = text.substr(0, e);
    }
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_point = false;
    for (char c : text) {
      if (c == '.') {
        if (seen_point) throw bad();
        seen_point = true;
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_point) ++frac_digits;
      } else {
        throw bad();
      }
    }
    if (digits.empty()) throw bad();
    while (digits.size() > 1 && digits.front() == '0') digits.erase(0, 1);
    exponent -= frac_digits;
    Rational value(parse_int(digits, bad));
    const Rational ten(10);
    for (; exponent > 0; --exponent) value *= ten;
    for (; exponent < 0; ++exponent) value /= ten;
    return negative ? -value : value;
  }

  /// Exact value of the shortest decimal that round-trips to `x`.
  static Rational from_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::invalid_argument("unrepresentable double");
    return parse(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  using wide = __int128;

  template <class Bad>
  static int_type parse_int(std::string_view s, Bad&& bad) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    int_type v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) {
      throw std::overflow_error("rational component out of range: " + std::string(s));
    }
    if (ec != std::errc() || p != s.data() + s.size()) throw bad();
    return v;
  }

  static wide wide_gcd(wide a, wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      wide t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(wide num, wide den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return Rational();
    const wide g = wide_gcd(num, den);
    num /= g;
    den /= g;
    constexpr wide lo = INT64_MIN + 1;  // keep negation safe
    constexpr wide hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) {
      throw std::overflow_error("rational overflow");
    }
    Rational r;
    r.num_ = static_cast<int_type>(num);
    r.den_ = static_cast<int_type>(den);
    return r;
  }

  void assign(int_type num, int_type den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
  }

  int_type num_ = 0;
  int_type den_ = 1;
};

/// Durations, edge lengths, latencies. Nonnegativity is a property of the
/// values stored in instances and walks, not of the type: expiry slacks go
/// negative during feasibility checks.
using Time = Rational;

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Largest g such that both a/g and b/g are integers.
inline Rational gcd(const Rational& a, const Rational& b) {
  if (a.is_zero()) return abs(b);
  if (b.is_zero()) return abs(a);
  return Rational(std::gcd(a.num(), b.num()), std::lcm(a.den(), b.den()));
}

/// Smallest positive h such that h/a and h/b are integers (a, b > 0).
inline Rational lcm(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0) {
    throw std::domain_error("lcm of nonpositive rationals");
  }
  const auto g = std::gcd(a.num(), b.num());
  const __int128 l = static_cast<__int128>(a.num() / g) * b.num();
  if (l > INT64_MAX) throw std::overflow_error("hyper-period overflow");
  return Rational(static_cast<Rational::int_type>(l), std::gcd(a.den(), b.den()));
}

/// a mod m for m > 0, result in [0, m).
inline Rational mod(const Rational& a, const Rational& m) {
  const Rational q = a / m;
  return a - m * Rational(q.floor());
}

}  // namespace patrol

template <>
struct std::hash<patrol::Rational> {
  std::size_t operator()(const patrol::Rational& r) const noexcept {
    const auto h1 = std::hash<std::int64_t>{}(r.num());
    const auto h2 = std::hash<std::int64_t>{}(r.den());
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};
