#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <boost/functional/hash.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kitbit {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

inline BigInt int_pow(const BigInt& base, unsigned exp) {
  BigInt r = 1;
  BigInt b = base;
  unsigned e = exp;
  while (e > 0) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e == 0) break;
    BigInt t = b;  // self-aliased squaring trips the karatsuba path
    b = t * t;
  }
  return r;
}

/// Rational with the sign folded into the numerator.
inline BigRat make_rat(BigInt num, BigInt den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return BigRat(num, den);
}

/// Floor k-th root of a nonnegative integer, plus exactness flag.
inline std::pair<BigInt, bool> int_kth_root(const BigInt& n, unsigned k) {
  if (n < 0) throw DomainError("kth root of negative");
  if (n == 0 || n == 1 || k == 1) return {n, true};
  BigInt lo = 1, hi = 1;
  while (int_pow(hi, k) <= n) hi <<= 1;
  // invariant: lo^k <= n < hi^k
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (int_pow(mid, k) <= n)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, int_pow(lo, k) == n};
}

// A series element: exact arbitrary-precision rational, or a finite real
// carrying an "approximate" mark. Exactness is sticky downward only --
// any operation touching an approx operand yields approx. Machine-word
// integers (the overwhelmingly common case) bypass bignum arithmetic.
class Value {
  enum class Kind : unsigned char { Small, Big, Approx };

 public:
  Value() : kind_(Kind::Small), small_(0), approx_(0.0) {}

  static Value exact(const BigRat& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) {
      const BigInt& n = numerator(r);
      if (n >= kMinSmall && n <= kMaxSmall)
        return exact(static_cast<long long>(n));
    }
    Value v;
    v.kind_ = Kind::Big;
    v.rat_ = r;
    return v;
  }
  static Value exact(long long n) {
    Value v;
    v.kind_ = Kind::Small;
    v.small_ = n;
    return v;
  }
  static Value exact(const BigInt& n) { return exact(BigRat(n)); }

  static Value approx(double d) {
    if (!std::isfinite(d)) throw DomainError("non-finite approx value");
    Value v;
    v.kind_ = Kind::Approx;
    v.approx_ = d;
    return v;
  }

  bool is_exact() const { return kind_ != Kind::Approx; }
  bool is_small() const { return kind_ == Kind::Small; }
  long long small() const { return small_; }

  BigRat rat() const {
    return kind_ == Kind::Small ? BigRat(small_) : rat_;
  }

  double to_double() const {
    switch (kind_) {
      case Kind::Small: return static_cast<double>(small_);
      case Kind::Big: return static_cast<double>(rat_);
      default: return approx_;
    }
  }

  bool is_zero() const {
    switch (kind_) {
      case Kind::Small: return small_ == 0;
      case Kind::Big: return false;  // canonical: small values live in Small
      default: return approx_ == 0.0;
    }
  }
  bool is_one() const {
    switch (kind_) {
      case Kind::Small: return small_ == 1;
      case Kind::Big: return false;
      default: return approx_ == 1.0;
    }
  }
  bool is_negative() const {
    switch (kind_) {
      case Kind::Small: return small_ < 0;
      case Kind::Big: return rat_ < 0;
      default: return approx_ < 0.0;
    }
  }

  bool is_integer() const {
    if (kind_ == Kind::Small) return true;
    if (kind_ == Kind::Big)
      return boost::multiprecision::denominator(rat_) == 1;
    return false;
  }
  BigInt integer() const {
    if (kind_ == Kind::Small) return BigInt(small_);
    if (!is_integer()) throw DomainError("value is not an integer");
    return boost::multiprecision::numerator(rat_);
  }

  Value abs() const {
    switch (kind_) {
      case Kind::Small:
        return small_ == std::numeric_limits<long long>::min()
                   ? exact(BigRat(-BigInt(small_)))
                   : exact(small_ < 0 ? -small_ : small_);
      case Kind::Big: return exact(BigRat(rat_ < 0 ? -rat_ : rat_));
      default: return approx(std::fabs(approx_));
    }
  }

  Value operator-() const {
    switch (kind_) {
      case Kind::Small:
        return small_ == std::numeric_limits<long long>::min()
                   ? exact(BigRat(-BigInt(small_)))
                   : exact(-small_);
      case Kind::Big: return exact(BigRat(-rat_));
      default: return approx(-approx_);
    }
  }

  friend Value operator+(const Value& a, const Value& b) {
    if (a.kind_ == Kind::Small && b.kind_ == Kind::Small) {
      long long r;
      if (!__builtin_add_overflow(a.small_, b.small_, &r)) return exact(r);
      return exact(BigRat(BigInt(a.small_) + BigInt(b.small_)));
    }
    if (a.is_exact() && b.is_exact()) return exact(BigRat(a.rat() + b.rat()));
    return approx(a.to_double() + b.to_double());
  }
  friend Value operator-(const Value& a, const Value& b) {
    if (a.kind_ == Kind::Small && b.kind_ == Kind::Small) {
      long long r;
      if (!__builtin_sub_overflow(a.small_, b.small_, &r)) return exact(r);
      return exact(BigRat(BigInt(a.small_) - BigInt(b.small_)));
    }
    if (a.is_exact() && b.is_exact()) return exact(BigRat(a.rat() - b.rat()));
    return approx(a.to_double() - b.to_double());
  }
  friend Value operator*(const Value& a, const Value& b) {
    if (a.kind_ == Kind::Small && b.kind_ == Kind::Small) {
      long long r;
      if (!__builtin_mul_overflow(a.small_, b.small_, &r)) return exact(r);
      return exact(BigRat(BigInt(a.small_) * BigInt(b.small_)));
    }
    if (a.is_exact() && b.is_exact()) return exact(BigRat(a.rat() * b.rat()));
    return approx(a.to_double() * b.to_double());
  }
  friend Value operator/(const Value& a, const Value& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    if (a.kind_ == Kind::Small && b.kind_ == Kind::Small) {
      if (a.small_ % b.small_ == 0 &&
          !(a.small_ == std::numeric_limits<long long>::min() &&
            b.small_ == -1))
        return exact(a.small_ / b.small_);
      return exact(make_rat(BigInt(a.small_), BigInt(b.small_)));
    }
    if (a.is_exact() && b.is_exact()) return exact(BigRat(a.rat() / b.rat()));
    return approx(a.to_double() / b.to_double());
  }

  // Exact equality; mixed or approx operands compare as doubles.
  friend bool operator==(const Value& a, const Value& b) {
    if (a.kind_ == Kind::Small && b.kind_ == Kind::Small)
      return a.small_ == b.small_;
    if (a.is_exact() && b.is_exact()) {
      if ((a.kind_ == Kind::Small) != (b.kind_ == Kind::Small))
        return a.rat() == b.rat();
      return a.rat_ == b.rat_;
    }
    return a.to_double() == b.to_double();
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  uint64_t hash64() const {
    switch (kind_) {
      case Kind::Small:
        return static_cast<uint64_t>(small_) * 0x9e3779b97f4a7c15ULL;
      case Kind::Big: {
        boost::hash<BigRat> h;
        return static_cast<uint64_t>(h(rat_)) ^ 0x517cc1b727220a95ULL;
      }
      default: {
        uint64_t bits;
        std::memcpy(&bits, &approx_, sizeof(bits));
        return bits ^ 0xabcdef12u;
      }
    }
  }

  std::string str() const {
    switch (kind_) {
      case Kind::Small: return std::to_string(small_);
      case Kind::Big: {
        const BigInt& num = boost::multiprecision::numerator(rat_);
        const BigInt& den = boost::multiprecision::denominator(rat_);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
      }
      default: {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", approx_);
        return buf;
      }
    }
  }

 private:
  static constexpr long long kMaxSmall =
      std::numeric_limits<long long>::max();
  static constexpr long long kMinSmall =
      std::numeric_limits<long long>::min();

  Kind kind_;
  long long small_ = 0;
  double approx_ = 0.0;
  BigRat rat_;
};

inline unsigned value_bits(const Value& v) {
  if (!v.is_exact()) return 64;
  if (v.is_small()) {
    unsigned long long m = v.small() < 0
                               ? ~static_cast<unsigned long long>(v.small()) + 1
                               : static_cast<unsigned long long>(v.small());
    unsigned b = 1;
    while (m >>= 1) ++b;
    return b + 1;
  }
  BigRat r = v.rat();
  auto bits = [](const BigInt& x) -> unsigned {
    if (x == 0) return 1;
    return boost::multiprecision::msb(x < 0 ? BigInt(-x) : x) + 1;
  };
  return bits(boost::multiprecision::numerator(r)) +
         bits(boost::multiprecision::denominator(r));
}

/// |a - b| < eps when either side is approximate; exact equality otherwise.
inline bool approx_equal(const Value& a, const Value& b, double eps) {
  if (a.is_exact() && b.is_exact()) return a.rat() == b.rat();
  return std::fabs(a.to_double() - b.to_double()) < eps;
}

inline bool within_eps(const Value& v, double eps) {
  if (v.is_exact()) return v.rat() == 0;
  return std::fabs(v.to_double()) < eps;
}

inline bool within_eps_of_one(const Value& v, double eps) {
  if (v.is_exact()) return v.rat() == 1;
  return std::fabs(v.to_double() - 1.0) < eps;
}

/// base^(p/q) with exactness preserved where an exact result exists.
/// Returns nullopt on domain violations (0 to a negative power, even root
/// of a negative, fractional power of an approx negative).
inline std::optional<Value> pow_value(const Value& base, const BigRat& e) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt p = numerator(e);
  BigInt q = denominator(e);  // q >= 1, gcd(p, q) == 1
  if (p == 0) return Value::exact(1);

  if (base.is_zero()) {
    if (p < 0) return std::nullopt;
    return Value::exact(0);
  }

  if (base.is_exact()) {
    BigRat b = base.rat();
    bool invert = p < 0;
    BigInt pa = invert ? BigInt(-p) : p;
    if (pa > 4096 || q > 4096) return std::nullopt;  // refuse absurd blowup
    unsigned up = static_cast<unsigned>(pa);
    BigInt num = int_pow(numerator(b), up);
    BigInt den = int_pow(denominator(b), up);
    if (q == 1) {
      BigRat r = invert ? make_rat(den, num) : make_rat(num, den);
      return Value::exact(r);
    }
    unsigned uq = static_cast<unsigned>(q);
    bool neg = num < 0;
    if (neg && uq % 2 == 0) return std::nullopt;
    auto [rn, okn] = int_kth_root(neg ? BigInt(-num) : num, uq);
    auto [rd, okd] = int_kth_root(den, uq);
    if (okn && okd) {
      BigRat r(neg ? BigInt(-rn) : rn, rd);
      if (invert) r = 1 / r;
      return Value::exact(r);
    }
    // no exact root: fall back to floating evaluation with the signed
    // exponent folded back in
    double d = std::pow(std::fabs(static_cast<double>(b)),
                        static_cast<double>(e));
    if (neg) d = -d;
    if (!std::isfinite(d)) return std::nullopt;
    return Value::approx(d);
  }

  double b = base.to_double();
  if (b < 0 && q != 1) return std::nullopt;
  double d;
  if (b < 0) {
    // integer exponent of a negative approx
    double m = std::pow(-b, static_cast<double>(e));
    bool odd = (p % 2) != 0;
    d = odd ? -m : m;
  } else {
    d = std::pow(b, static_cast<double>(e));
  }
  if (!std::isfinite(d)) return std::nullopt;
  return Value::approx(d);
}

/// log_{|base|} |arg|. Probes small exact exponents p/q (|p|, q <= max_pq)
/// before falling back to floating evaluation. Only the rounded p near the
/// floating estimate needs an exact check for each q.
inline std::optional<Value> log_value(const Value& base, const Value& arg,
                                      int max_pq = 16) {
  Value b = base.abs();
  Value a = arg.abs();
  if (b.is_zero() || a.is_zero() || b.is_one()) return std::nullopt;
  double estimate = std::log(a.to_double()) / std::log(b.to_double());
  if (b.is_exact() && a.is_exact()) {
    if (a.is_one()) return Value::exact(0);
    BigRat br = b.rat();
    BigRat ar = a.rat();
    if (std::isfinite(estimate)) {
      using boost::multiprecision::denominator;
      using boost::multiprecision::numerator;
      for (int q = 1; q <= max_pq; ++q) {
        long long p = std::llround(estimate * q);
        if (p == 0 || std::llabs(p) > max_pq) continue;
        if (std::fabs(estimate * q - p) > 1e-6) continue;
        if (boost::multiprecision::gcd(BigInt(p), BigInt(q)) != 1) continue;
        unsigned up = static_cast<unsigned>(std::llabs(p));
        unsigned uq = static_cast<unsigned>(q);
        BigRat bp(int_pow(numerator(br), up), int_pow(denominator(br), up));
        BigRat aq(int_pow(numerator(ar), uq), int_pow(denominator(ar), uq));
        if (p > 0) {
          if (bp == aq) return Value::exact(BigRat(p, q));
        } else {
          if (bp * aq == 1) return Value::exact(BigRat(p, q));
        }
      }
    }
  }
  if (!std::isfinite(estimate)) return std::nullopt;
  return Value::approx(estimate);
}

/// Parses "123", "-4/7", "2.5", "-0.125". Decimal literals become the exact
/// rational of their printed form.
inline std::optional<Value> parse_value(std::string_view text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) return std::nullopt;
  std::string s(text.substr(begin, end - begin + 1));
  if (s.empty()) return std::nullopt;

  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i >= s.size()) return std::nullopt;

  auto digits = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };

  std::string body = s.substr(i);
  size_t slash = body.find('/');
  if (slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!digits(num) || !digits(den)) return std::nullopt;
    BigInt n(num), d(den);
    if (d == 0) return std::nullopt;
    BigRat r(n, d);
    if (neg) r = -r;
    return Value::exact(r);
  }
  size_t dot = body.find('.');
  if (dot != std::string::npos) {
    std::string ip = body.substr(0, dot);
    std::string fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits(ip) || (!fp.empty() && !digits(fp))) return std::nullopt;
    BigInt scale = int_pow(BigInt(10), static_cast<unsigned>(fp.size()));
    BigInt n = BigInt(ip) * scale + (fp.empty() ? BigInt(0) : BigInt(fp));
    BigRat r(n, scale);
    if (neg) r = -r;
    return Value::exact(r);
  }
  if (!digits(body)) return std::nullopt;
  BigInt n(body);
  BigRat r(n);
  if (neg) r = -r;
  return Value::exact(r);
}

}  // namespace kitbit
