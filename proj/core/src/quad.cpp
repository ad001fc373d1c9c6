#include "l1flow/quad.hpp"

#include <sstream>

namespace l1flow {

namespace mp = boost::multiprecision;

int Quad::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Signs differ: compare a^2 with 2 b^2.  a + b*sqrt2 > 0 with a > 0, b < 0
  // iff a^2 > 2 b^2; with a < 0, b > 0 iff a^2 < 2 b^2.
  const Rational a2 = a_ * a_;
  const Rational b2 = 2 * b_ * b_;
  if (a2 == b2) return 0;  // impossible for b != 0 (sqrt2 irrational), kept for safety
  const bool a_dominates = a2 > b2;
  return a_dominates ? sa : sb;
}

Quad Quad::operator/(const Quad& o) const {
  const Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
  if (norm == 0) throw error("Quad: division by zero");
  // 1/(a+b s) = (a - b s)/(a^2 - 2 b^2)
  const Rational ia = o.a_ / norm;
  const Rational ib = -o.b_ / norm;
  return *this * Quad(ia, ib);
}

namespace {

// floor(sqrt(2) * r) for a rational r, via integer square roots.
BigInt floor_sqrt2_times(const Rational& r) {
  const BigInt p = numerator(r);
  const BigInt q = denominator(r);  // q > 0
  if (p >= 0) {
    // largest n >= 0 with n*q <= sqrt(2 p^2): n = isqrt(2 p^2) / q
    const BigInt m = mp::sqrt(BigInt(2 * p * p));
    return m / q;
  }
  // floor(-x) = -ceil(x) = -(floor(x) + (x integer ? 0 : 1)); sqrt2*|r| is
  // never an integer unless p = 0.
  const BigInt m = mp::sqrt(BigInt(2 * p * p));
  return -(m / q) - 1;
}

BigInt floor_rational(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (r < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

}  // namespace

BigInt Quad::floor() const {
  BigInt n = floor_rational(a_) + (b_ == 0 ? BigInt(0) : floor_sqrt2_times(b_));
  // n <= value < n + 2; one exact adjustment may be needed.
  Quad rem = *this - Quad(Rational(n));
  if (rem.sign() < 0) { --n; rem += Quad(Rational(1)); }
  if ((rem - Quad(Rational(1))).sign() >= 0) ++n;
  return n;
}

double Quad::to_double() const {
  return a_.convert_to<double>() + b_.convert_to<double>() * 1.4142135623730951;
}

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt num(s.substr(0, slash));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw error("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::exception&) {
    throw error("malformed rational: '" + s + "'");
  }
}

std::string Quad::str() const {
  if (b_ == 0) return rational_str(a_);
  std::ostringstream os;
  os << rational_str(a_) << (b_ > 0 ? "+" : "-") << rational_str(b_ < 0 ? Rational(-b_) : b_)
     << "*sqrt2";
  return os.str();
}

}  // namespace l1flow
