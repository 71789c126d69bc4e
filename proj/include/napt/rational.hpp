#pragma once

// Exact rational scalars backed by GMP.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace napt {

class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I value) : q_(to_mpz(value)) {}  // NOLINT(google-explicit-constructor)

  template <std::integral I, std::integral J>
  Rational(I num, J den) : q_(to_mpz(num), to_mpz(den)) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_.canonicalize();
  }

  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Exact conversion of a finite double.
  static Rational from_double(double d) {
    if (d != d || d - d != 0.0) throw std::domain_error("non-finite double");
    return Rational(mpq_class(d));
  }

  // Accepts "p", "p/q", "-p/q". Throws std::invalid_argument on malformed text.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto valid = [](std::string_view part, bool allow_sign) {
      if (part.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
      if (i == part.size()) return false;
      for (; i < part.size(); ++i)
        if (part[i] < '0' || part[i] > '9') return false;
      return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num, true) || !valid(den, false))
      throw std::invalid_argument("malformed rational '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(mpq_class(n, d));
  }

  // "p" for integers, "p/q" otherwise.
  std::string str() const { return q_.get_str(); }
  // Always "p/q".
  std::string fraction() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  double to_double() const { return q_.get_d(); }
  const mpq_class& get() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  mpz_class floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
  }
  mpz_class ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
  }

  Rational pow(unsigned e) const {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), e);
    return Rational(mpq_class(n, d));
  }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  template <std::integral I>
  static mpz_class to_mpz(I v) {
    if constexpr (std::is_signed_v<I>) {
      if constexpr (sizeof(I) <= sizeof(long)) {
        return mpz_class(static_cast<long>(v));
      } else {
        return mpz_class(std::to_string(v), 10);
      }
    } else {
      if constexpr (sizeof(I) <= sizeof(unsigned long)) {
        return mpz_class(static_cast<unsigned long>(v));
      } else {
        return mpz_class(std::to_string(v), 10);
      }
    }
  }

  mpq_class q_;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

namespace detail {

inline mpz_class isqrt_floor(const mpz_class& v) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

}  // namespace detail

// Rational q with q >= sqrt(x), within 10^-digits of it. x >= 0.
inline Rational sqrt_upper(const Rational& x, unsigned digits = 9) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative rational");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  // sqrt(a/b) = sqrt(a*b)/b
  mpz_class ab = x.numerator() * x.denominator() * scale * scale;
  mpz_class s = detail::isqrt_floor(ab);
  if (s * s != ab) s += 1;
  return Rational(mpq_class(s, x.denominator() * scale));
}

// Rational q with 0 <= q <= sqrt(x), within 10^-digits of it. x >= 0.
inline Rational sqrt_lower(const Rational& x, unsigned digits = 9) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative rational");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class ab = x.numerator() * x.denominator() * scale * scale;
  return Rational(mpq_class(detail::isqrt_floor(ab), x.denominator() * scale));
}

}  // namespace napt
