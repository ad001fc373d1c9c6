#ifndef L1FLOW_QUAD_HPP
#define L1FLOW_QUAD_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>

namespace l1flow {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of the field Q(sqrt 2), stored as a + b*sqrt(2) with exact
/// rational coefficients.  All comparisons are decided by integer
/// arithmetic; no floating point is ever consulted.
class Quad {
 public:
  Quad() : a_(0), b_(0) {}
  Quad(long v) : a_(v), b_(0) {}  // NOLINT: implicit by design
  Quad(const Rational& a) : a_(a), b_(0) {}
  Quad(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static Quad sqrt2() { return Quad(Rational(0), Rational(1)); }
  /// p/q + (r/s)*sqrt(2)
  static Quad of(long p, long q, long r = 0, long s = 1) {
    return Quad(Rational(p, q), Rational(r, s));
  }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  bool is_rational() const { return b_ == 0; }

  Quad operator-() const { return Quad(-a_, -b_); }
  Quad operator+(const Quad& o) const { return Quad(a_ + o.a_, b_ + o.b_); }
  Quad operator-(const Quad& o) const { return Quad(a_ - o.a_, b_ - o.b_); }
  Quad operator*(const Quad& o) const {
    return Quad(a_ * o.a_ + 2 * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
  }
  Quad operator/(const Quad& o) const;
  Quad& operator+=(const Quad& o) { a_ += o.a_; b_ += o.b_; return *this; }
  Quad& operator-=(const Quad& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  Quad& operator*=(const Quad& o) { *this = *this * o; return *this; }

  bool operator==(const Quad& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const Quad& o) const { return !(*this == o); }
  bool operator<(const Quad& o) const { return (*this - o).sign() < 0; }
  bool operator>(const Quad& o) const { return o < *this; }
  bool operator<=(const Quad& o) const { return !(o < *this); }
  bool operator>=(const Quad& o) const { return !(*this < o); }

  /// Exact sign of a + b*sqrt(2): compares a^2 against 2 b^2 when signs of
  /// the two summands differ.
  int sign() const;
  Quad abs() const { return sign() < 0 ? -*this : *this; }

  /// Largest integer n with n <= value, exact (integer square roots).
  BigInt floor() const;
  /// value - floor(value), in [0, 1).
  Quad frac() const { return *this - Quad(Rational(floor())); }

  /// Decimal approximation for display only; never used in any decision.
  double to_double() const;

  /// "p/q" when b = 0, otherwise "p/q+r/s*sqrt2" (signs folded in).
  std::string str() const;

 private:
  Rational a_, b_;
};

inline Quad operator*(long k, const Quad& q) { return Quad(Rational(k)) * q; }

std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

}  // namespace l1flow

#endif
