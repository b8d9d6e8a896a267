#pragma once

// Exact rational numbers.
//
// Values whose reduced numerator and denominator fit in a signed 64-bit word
// are kept inline and computed with 128-bit intermediates; anything larger
// spills into a GMP rational. The representation is canonical: a value has
// exactly one encoding, so equality and hashing work on the fields directly.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "contact/error.hpp"

namespace contact {

using Integer = mpz_class;

inline std::string to_string(const Integer& z) { return z.get_str(); }

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

inline bool fits_small(i128 v) { return v <= kSmallMax && v >= -kSmallMax; }

inline u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

inline std::uint64_t uabs(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v);
}

inline mpz_class mpz_from_i128(i128 v) {
  const bool neg = v < 0;
  u128 u = abs128(v);
  mpz_class hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

inline bool mpz_fits_small(const mpz_class& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) return false;
  return z.get_si() != std::numeric_limits<long>::min();
}

}  // namespace detail

class Rational {
 public:
  Rational() = default;
  Rational(int n) : num_(n) {}                      // NOLINT(google-explicit-constructor)
  Rational(long n) : num_(n) { check_small_int(); }  // NOLINT(google-explicit-constructor)
  Rational(long long n) : num_(n) { check_small_int(); }  // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d) { assign_i128(n, d); }
  Rational(const Integer& n) { assign_big(mpq_class(n)); }  // NOLINT(google-explicit-constructor)
  Rational(const Integer& n, const Integer& d) {
    if (d == 0) throw DimensionError("rational with zero denominator");
    mpq_class q(n, d);
    q.canonicalize();
    assign_big(std::move(q));
  }
  explicit Rational(const mpq_class& q) {
    mpq_class c(q);
    c.canonicalize();
    assign_big(std::move(c));
  }

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      if (o.big_) {
        if (big_) *big_ = *o.big_;
        else big_ = std::make_unique<mpq_class>(*o.big_);
      } else {
        big_.reset();
      }
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /** Parses "p/q" or "p" (optional sign, decimal digits). */
  static Rational parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    std::size_t start = s.find_first_not_of(" \t");
    if (start == std::string::npos) throw ParseError("empty rational");
    s = s.substr(start);
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& t, bool allow_sign) {
      if (t.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
    if (slash == std::string::npos) {
      if (!valid_int(s, true)) throw ParseError("bad rational '" + s + "'");
      return Rational(Integer(strip_plus(s)));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!valid_int(n, true) || !valid_int(d, false)) throw ParseError("bad rational '" + s + "'");
    Integer dz(d);
    if (dz == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(Integer(strip_plus(n)), dz);
  }

  bool is_small() const { return !big_; }
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }

  Integer numerator() const { return big_ ? Integer(big_->get_num()) : Integer(static_cast<long>(num_)); }
  Integer denominator() const { return big_ ? Integer(big_->get_den()) : Integer(static_cast<long>(den_)); }
  /** Inline fields; only meaningful when is_small(). */
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  }

  std::string str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /** Largest integer not exceeding the value. */
  Integer floor() const {
    if (!big_) {
      std::int64_t q = num_ / den_;
      if ((num_ % den_ != 0) && (num_ < 0)) --q;
      return Integer(static_cast<long>(q));
    }
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return r;
  }
  /** Nearest integer, ties rounded toward +infinity. */
  Integer round() const { return (*this + Rational(1, 2)).floor(); }

  Rational operator-() const {
    Rational r(*this);
    if (r.big_) *r.big_ = -*r.big_;
    else r.num_ = -r.num_;
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw DimensionError("inverse of zero");
    if (!big_) {
      Rational r;
      r.num_ = num_ < 0 ? -den_ : den_;
      r.den_ = num_ < 0 ? -num_ : num_;
      return r;
    }
    mpq_class q = 1 / *big_;
    Rational r;
    r.assign_big(std::move(q));
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      Rational r;
      if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t s;
        if (!__builtin_add_overflow(a.num_, b.num_, &s) && s != std::numeric_limits<std::int64_t>::min()) {
          r.num_ = s;
          return r;
        }
        r.assign_i128(static_cast<detail::i128>(a.num_) + b.num_, 1);
        return r;
      }
      const std::uint64_t d1 = detail::gcd64(static_cast<std::uint64_t>(a.den_), static_cast<std::uint64_t>(b.den_));
      if (d1 == 1) {
        detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ + static_cast<detail::i128>(b.num_) * a.den_;
        detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
        r.assign_reduced_i128(n, d);
        return r;
      }
      const auto ad = a.den_ / static_cast<std::int64_t>(d1);
      const auto bd = b.den_ / static_cast<std::int64_t>(d1);
      detail::i128 t = static_cast<detail::i128>(a.num_) * bd + static_cast<detail::i128>(b.num_) * ad;
      std::uint64_t tm = static_cast<std::uint64_t>(detail::abs128(t) % d1);
      std::uint64_t d2 = detail::gcd64(tm, d1);
      detail::i128 n = t / static_cast<detail::i128>(d2);
      detail::i128 d = static_cast<detail::i128>(ad) * (b.den_ / static_cast<std::int64_t>(d2));
      r.assign_reduced_i128(n, d);
      return r;
    }
    Rational r;
    r.assign_big(a.to_mpq() + b.to_mpq());
    return r;
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      Rational r;
      if (a.num_ == 0 || b.num_ == 0) return r;
      if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t p;
        if (!__builtin_mul_overflow(a.num_, b.num_, &p) && p != std::numeric_limits<std::int64_t>::min()) {
          r.num_ = p;
          return r;
        }
        r.assign_reduced_i128(static_cast<detail::i128>(a.num_) * b.num_, 1);
        return r;
      }
      const auto g1 = static_cast<std::int64_t>(detail::gcd64(detail::uabs(a.num_), static_cast<std::uint64_t>(b.den_)));
      const auto g2 = static_cast<std::int64_t>(detail::gcd64(detail::uabs(b.num_), static_cast<std::uint64_t>(a.den_)));
      detail::i128 n = static_cast<detail::i128>(a.num_ / g1) * (b.num_ / g2);
      detail::i128 d = static_cast<detail::i128>(a.den_ / g2) * (b.den_ / g1);
      r.assign_reduced_i128(n, d);
      return r;
    }
    Rational r;
    r.assign_big(a.to_mpq() * b.to_mpq());
    return r;
  }

  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical form: a spilled value never equals an inline one
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  friend int compare(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return (a.num_ > b.num_) - (a.num_ < b.num_);
      detail::i128 l = static_cast<detail::i128>(a.num_) * b.den_;
      detail::i128 r = static_cast<detail::i128>(b.num_) * a.den_;
      return (l > r) - (l < r);
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return (c > 0) - (c < 0);
  }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  std::size_t hash() const {
    if (!big_) {
      std::uint64_t h = static_cast<std::uint64_t>(num_) * 0x9E3779B97F4A7C15ULL;
      h ^= static_cast<std::uint64_t>(den_) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
    return std::hash<std::string>{}(big_->get_str());
  }

 private:
  void check_small_int() {
    if (num_ == std::numeric_limits<std::int64_t>::min()) {
      assign_big(mpq_class(mpz_class(std::to_string(num_))));
    }
  }

  void assign_i128(detail::i128 n, detail::i128 d) {
    if (d == 0) throw DimensionError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::u128 g = detail::gcd128(detail::abs128(n), static_cast<detail::u128>(d));
    if (g > 1) {
      n /= static_cast<detail::i128>(g);
      d /= static_cast<detail::i128>(g);
    }
    assign_reduced_i128(n, d);
  }

  // n/d already in lowest terms with d > 0.
  void assign_reduced_i128(detail::i128 n, detail::i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (detail::fits_small(n) && d <= detail::kSmallMax) {
      num_ = static_cast<std::int64_t>(n);
      den_ = n == 0 ? 1 : static_cast<std::int64_t>(d);
      big_.reset();
      return;
    }
    mpq_class q(detail::mpz_from_i128(n), detail::mpz_from_i128(d));
    q.canonicalize();
    assign_big(std::move(q));
  }

  // q must be canonical.
  void assign_big(mpq_class q) {
    if (detail::mpz_fits_small(q.get_num()) && detail::mpz_fits_small(q.get_den())) {
      num_ = q.get_num().get_si();
      den_ = q.get_den().get_si();
      big_.reset();
      return;
    }
    num_ = 0;
    den_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace contact

template <>
struct std::hash<contact::Rational> {
  std::size_t operator()(const contact::Rational& r) const noexcept { return r.hash(); }
};
