#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "ubg/error.hpp"

namespace ubg {

namespace detail {

using i128 = __int128;

inline std::int64_t narrow(i128 v, const char* where) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw Error(ErrorKind::kOverflow, std::string("64-bit overflow in ") + where);
  }
  return static_cast<std::int64_t>(v);
}

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

/// Exact rational with 64-bit numerator and positive denominator, always
/// stored in lowest terms. Intermediate products use 128-bit integers; a
/// result that does not fit throws kOverflow instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  static Rational from_wide(detail::i128 n, detail::i128 d) {
    if (d == 0) throw Error(ErrorKind::kOverflow, "zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::i128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num_ = detail::narrow(n, "rational numerator");
    r.den_ = detail::narrow(d, "rational denominator");
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  Rational operator-() const { return from_wide(-static_cast<detail::i128>(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(static_cast<detail::i128>(a.num_) + b.num_, a.den_);
    return from_wide(static_cast<detail::i128>(a.num_) * b.den_ +
                         static_cast<detail::i128>(b.num_) * a.den_,
                     static_cast<detail::i128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<detail::i128>(a.num_) * b.num_,
                     static_cast<detail::i128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorKind::kOverflow, "division by zero");
    return from_wide(static_cast<detail::i128>(a.num_) * b.den_,
                     static_cast<detail::i128>(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    detail::i128 l = static_cast<detail::i128>(a.num_) * b.den_;
    detail::i128 r = static_cast<detail::i128>(b.num_) * a.den_;
    return l <=> r;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Nonnegative extended value: a rational or +infinity (nullopt).
using Bound = std::optional<Rational>;

inline bool bound_less(const Bound& a, const Bound& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

inline Bound bound_min(const Bound& a, const Bound& b) { return bound_less(b, a) ? b : a; }

inline std::string bound_str(const Bound& b) { return b ? b->str() : std::string("inf"); }

/// Dyadic rational num / 2^log2den, normalized so that num is odd unless the
/// value is zero (in which case log2den is 0).
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t n) : num_(n), log2den_(0) {}  // NOLINT(implicit)
  Dyadic(std::int64_t n, int log2den) : num_(n), log2den_(log2den) { normalize(); }

  std::int64_t num() const { return num_; }
  int log2den() const { return log2den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  Rational to_rational() const {
    if (log2den_ > 62) throw Error(ErrorKind::kOverflow, "dyadic denominator too large");
    return Rational(num_, std::int64_t{1} << log2den_);
  }

  static Dyadic from_rational(const Rational& r) {
    std::int64_t d = r.den();
    if ((d & (d - 1)) != 0) {
      throw Error(ErrorKind::kScalarDomain, "not a dyadic rational: " + r.str());
    }
    int k = 0;
    while ((std::int64_t{1} << k) != d) ++k;
    return Dyadic(r.num(), k);
  }

  Dyadic operator-() const { return Dyadic(-num_, log2den_); }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    int k = a.log2den_ > b.log2den_ ? a.log2den_ : b.log2den_;
    detail::i128 n = (static_cast<detail::i128>(a.num_) << (k - a.log2den_)) +
                     (static_cast<detail::i128>(b.num_) << (k - b.log2den_));
    return Dyadic(detail::narrow(n, "dyadic sum"), k);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(detail::narrow(static_cast<detail::i128>(a.num_) * b.num_, "dyadic product"),
                  a.log2den_ + b.log2den_);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int k = a.log2den_ > b.log2den_ ? a.log2den_ : b.log2den_;
    detail::i128 l = static_cast<detail::i128>(a.num_) << (k - a.log2den_);
    detail::i128 r = static_cast<detail::i128>(b.num_) << (k - b.log2den_);
    return l <=> r;
  }

  std::string str() const { return to_rational().str(); }
  friend std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

 private:
  void normalize() {
    if (num_ == 0) {
      log2den_ = 0;
      return;
    }
    while (log2den_ > 0 && (num_ % 2) == 0) {
      num_ /= 2;
      --log2den_;
    }
    while (log2den_ < 0) {
      num_ = detail::narrow(static_cast<detail::i128>(num_) * 2, "dyadic normalize");
      ++log2den_;
    }
  }

  std::int64_t num_ = 0;
  int log2den_ = 0;
};

inline Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }

/// Parses "a" or "a/b" (optional leading '-').
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    s = trim(s);
    if (s.empty()) throw Error(ErrorKind::kConfig, "empty number in '" + std::string(text) + "'");
    std::size_t pos = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      pos = 1;
    }
    if (pos >= s.size()) throw Error(ErrorKind::kConfig, "bad number '" + std::string(text) + "'");
    detail::i128 v = 0;
    for (; pos < s.size(); ++pos) {
      if (s[pos] < '0' || s[pos] > '9') {
        throw Error(ErrorKind::kConfig, "bad number '" + std::string(text) + "'");
      }
      v = v * 10 + (s[pos] - '0');
      if (v > INT64_MAX) throw Error(ErrorKind::kOverflow, "number too large");
    }
    return static_cast<std::int64_t>(neg ? -v : v);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t d = parse_int(text.substr(slash + 1));
  if (d == 0) throw Error(ErrorKind::kConfig, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), d);
}

}  // namespace ubg
