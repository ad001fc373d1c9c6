#include "doctest.h"
#include "l1flow/interval_set.hpp"
#include "l1flow/quad.hpp"

#include <random>

using namespace l1flow;

namespace {
Quad alpha() { return Quad(Rational(-1), Rational(1)); }  // sqrt2 - 1
}

TEST_CASE("quad field operations") {
  const Quad s2 = Quad::sqrt2();
  CHECK((Quad(1) + s2) * (Quad(1) - s2) == Quad(-1));  // conjugate product
  CHECK((s2 * s2) == Quad(2));
  CHECK((Quad(1) / s2) == Quad(Rational(0), Rational(1, 2)));
  CHECK_THROWS_AS(Quad(1) / Quad(0), error);
}

TEST_CASE("quad sign decisions") {
  CHECK(Quad(Rational(3), Rational(-2)).sign() > 0);  // 3 - 2 sqrt2 > 0
  CHECK(Quad(Rational(-3), Rational(2)).sign() < 0);
  CHECK(Quad(Rational(1), Rational(-1)).sign() < 0);  // 1 - sqrt2 < 0
  CHECK(Quad(0).sign() == 0);
  CHECK(alpha().sign() > 0);
}

TEST_CASE("quad floor") {
  // Integer-squaring oracle: floor(5 sqrt2) is the largest n with n^2 <= 50.
  long n = 0;
  while ((n + 1) * (n + 1) <= 50) ++n;
  CHECK(Quad(Rational(0), Rational(5)).floor() == BigInt(n));
  CHECK(Quad(Rational(0), Rational(5)).floor() == BigInt(7));

  CHECK(Quad(Rational(3, 2)).floor() == BigInt(1));
  CHECK(Quad(Rational(-3, 2)).floor() == BigInt(-2));
  CHECK(Quad(Rational(0), Rational(-1)).floor() == BigInt(-2));  // -sqrt2
  CHECK(Quad(2).floor() == BigInt(2));
  CHECK(mod_one(Quad(Rational(0), Rational(-1))) == Quad(Rational(2), Rational(-1)));
}

TEST_CASE("quad ordering against floating evaluation") {
  // Total order consistent with the real embedding on 10^4 random scalars.
  std::mt19937_64 rng(12345);
  auto rnd = [&rng]() {
    const long num = static_cast<long>(rng() % 2001) - 1000;
    const long den = static_cast<long>(rng() % 50) + 1;
    return Rational(num, den);
  };
  for (int i = 0; i < 10000; ++i) {
    const Quad x(rnd(), rnd()), y(rnd(), rnd());
    const double dx = x.to_double(), dy = y.to_double();
    if (dx < dy - 1e-6) CHECK(x < y);
    if (dx > dy + 1e-6) CHECK(y < x);
  }
}

TEST_CASE("interval set algebra") {
  const IntervalSet a = IntervalSet::single(Quad(0), Quad(1));
  const IntervalSet b = IntervalSet::single(Quad(Rational(1, 2)), Quad(1));
  CHECK(a.subtract(b) == IntervalSet::single(Quad(0), Quad(Rational(1, 2))));

  // adjacent merge
  const IntervalSet c = IntervalSet{{Quad(0), alpha()}}.unite(IntervalSet{{alpha(), Quad(1)}});
  CHECK(c == a);
  CHECK(c.measure() == Quad(1));
  CHECK(c.size() == 1);

  const IntervalSet d =
      IntervalSet{{Quad(0), Quad(Rational(1, 3))}, {Quad(Rational(1, 3)), Quad(Rational(1, 2))}};
  CHECK(d == IntervalSet::single(Quad(0), Quad(Rational(1, 2))));
}

TEST_CASE("inclusion-exclusion holds exactly") {
  std::mt19937_64 rng(99);
  auto rnd_set = [&rng]() {
    std::vector<Interval> parts;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      const Rational lo(static_cast<long>(rng() % 100), 100);
      const Rational len(1 + static_cast<long>(rng() % 40), 200);
      parts.push_back({Quad(lo), Quad(lo + len)});
    }
    return IntervalSet::from_parts(parts);
  };
  for (int i = 0; i < 300; ++i) {
    const IntervalSet a = rnd_set(), b = rnd_set();
    CHECK(a.unite(b).measure() + a.intersect(b).measure() == a.measure() + b.measure());
    CHECK(a.subtract(b).measure() + a.intersect(b).measure() == a.measure());
  }
}

TEST_CASE("circle translation") {
  const IntervalSet a = IntervalSet::single(Quad(Rational(3, 4)), Quad(1));
  CHECK(circle_translate(a, Quad(Rational(1, 2))) ==
        IntervalSet::single(Quad(Rational(1, 4)), Quad(Rational(1, 2))));

  const IntervalSet full = IntervalSet::single(Quad(0), Quad(1));
  CHECK(circle_translate(full, alpha()) == full);

  // alpha + 1/2 < 1 (exact comparison), so [0,1/2) translates without a split.
  CHECK((alpha() + Quad(Rational(1, 2))) < Quad(1));
  CHECK(circle_translate(IntervalSet::single(Quad(0), Quad(Rational(1, 2))), alpha()) ==
        IntervalSet::single(alpha(), alpha() + Quad(Rational(1, 2))));
}

TEST_CASE("circle translation is a measure-algebra bijection") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::vector<Interval> parts;
    for (int j = 0; j < 3; ++j) {
      const Rational lo(static_cast<long>(rng() % 100), 101);
      const Rational len(1 + static_cast<long>(rng() % 30), 200);
      const Rational hi = std::min(Rational(1), Rational(lo + len));
      parts.push_back({Quad(lo), Quad(hi)});
    }
    const IntervalSet a = IntervalSet::from_parts(parts);
    const Quad t = Quad(Rational(static_cast<long>(rng() % 17) - 8, 7)) +
                   Quad(Rational(0), Rational(static_cast<long>(rng() % 5) - 2, 9));
    const IntervalSet moved = circle_translate(a, t);
    CHECK(moved.measure() == a.measure());
    CHECK(circle_translate(moved, -t) == a);
  }
}
