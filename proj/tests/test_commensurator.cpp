#include "doctest.h"
#include "l1flow/commensurator.hpp"

#include <random>

using namespace l1flow;

namespace {

// Seeded generator shared with the acceptance suite battery style: products
// of half-line shifts, swaps and restrictions.
TailedTranslation random_tt(std::mt19937_64& rng, bool allow_index = true) {
  auto rnd_q = [&rng](long denom_cap) {
    return Quad(Rational(static_cast<long>(rng() % 60), 1 + static_cast<long>(rng() % denom_cap)));
  };
  TailedTranslation t = TailedTranslation::identity_on_halfline();
  const int steps = 2 + static_cast<int>(rng() % 4);
  for (int i = 0; i < steps; ++i) {
    switch (rng() % 3) {
      case 0: {
        if (!allow_index) { t = t.compose(TailedTranslation::identity_on_halfline()); break; }
        const long num = static_cast<long>(rng() % 11) - 5;
        t = t.compose(TailedTranslation::halfline_shift(Quad(Rational(num, 3))));
        break;
      }
      case 1: {
        const Quad a = rnd_q(7), b = a + Quad(1) + rnd_q(5);
        const Quad len = Quad(Rational(1 + static_cast<long>(rng() % 6), 7));
        t = t.compose(TailedTranslation::halfline_swap(a, b, len));
        break;
      }
      default: {
        const Quad a = rnd_q(5);
        t = TailedTranslation::halfline_swap(a, a + Quad(2), Quad(Rational(1, 2))).compose(t);
        break;
      }
    }
  }
  return t;
}

}  // namespace

TEST_CASE("composition of half-line shifts") {
  const auto s1 = TailedTranslation::halfline_shift(Quad(1));
  const auto s2 = TailedTranslation::halfline_shift(Quad(2));
  const auto s3 = s1.compose(s2);
  CHECK(s3.index() == Quad(3));
  // shift(+1) o shift(+2) agrees with shift(+3) wherever defined
  for (long k = 0; k < 40; ++k) {
    const Quad x(Rational(k, 3));
    const auto y = s3.apply(x);
    if (y) CHECK(*y == x + Quad(3));
  }
  CHECK(s3.equivalent(TailedTranslation::halfline_shift(Quad(3))));
}

TEST_CASE("T o T^{-1} is the identity on rng T") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const auto t = random_tt(rng);
    const auto id = t.compose(t.inverse());
    CHECK(id.index() == Quad(0));
    for (const auto& p : id.pieces()) CHECK(p.shift == Quad(0));
    CHECK(id.domain() == t.range());
  }
}

TEST_CASE("composition against a pointwise grid oracle") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_tt(rng), b = random_tt(rng);
    const auto c = a.compose(b);
    // pointwise oracle on a 10^-3-step grid
    for (long k = -2000; k < 30000; k += 1000) {
      const Quad x(Rational(k, 1000));
      const auto via_b = b.apply(x);
      std::optional<Quad> expect;
      if (via_b) expect = a.apply(*via_b);
      const auto got = c.apply(x);
      if (expect && got) CHECK(*expect == *got);
      if (got) CHECK(expect.has_value());
      // dom(c) = b^{-1}(rng b n dom a): if the chain is defined, c must be too
      if (expect) CHECK(got.has_value());
    }
  }
}

TEST_CASE("index of elementary maps") {
  CHECK(TailedTranslation::halfline_shift(Quad(1)).index() == Quad(1));
  CHECK(TailedTranslation::halfline_swap(Quad(0), Quad(1), Quad(1)).index() == Quad(0));
  CHECK(TailedTranslation::identity_on_halfline().index() == Quad(0));
}

TEST_CASE("restriction preserves the index") {
  const auto s1 = TailedTranslation::halfline_shift(Quad(1));
  // restriction of shift(+1) to [2, inf): dom \ rng = [2,3)
  const auto r = s1.restrict(TailedSet::ray_right(Quad(2)));
  CHECK(r.index() == Quad(1));
  CHECK(r.domain() == TailedSet::ray_right(Quad(2)));

  const auto id3 = TailedTranslation::identity_on_halfline().restrict(TailedSet::ray_right(Quad(3)));
  CHECK(id3.index() == Quad(0));

  // restrict shift(+1) to [0,inf) minus [4,6)
  const auto r2 = s1.restrict(TailedSet::half_line().subtract(
      TailedSet::bounded(IntervalSet::single(Quad(4), Quad(6)))));
  CHECK(r2.index() == Quad(1));

  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    const auto t = random_tt(rng);
    // co-finite subset of the domain
    const Quad a(Rational(static_cast<long>(rng() % 50), 7));
    const Quad b = a + Quad(Rational(1 + static_cast<long>(rng() % 20), 5));
    const auto sub = t.domain().subtract(TailedSet::bounded(IntervalSet::single(a, b)));
    CHECK(t.restrict(sub).index() == t.index());
  }
}

TEST_CASE("ambient-set formula for the index") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 60; ++i) {
    const auto t = random_tt(rng);
    TailedSet ambient = t.domain().unite(t.range());
    // enlarge by random bounded pieces
    for (int j = 0; j < 3; ++j) {
      const Quad a = -Quad(Rational(static_cast<long>(rng() % 40), 3));
      ambient = ambient.unite(
          TailedSet::bounded(IntervalSet::single(a, a + Quad(Rational(1 + static_cast<long>(rng() % 9), 4)))));
    }
    CHECK(t.index_in_ambient(ambient) == t.index());
  }
}

TEST_CASE("index is a homomorphism and invariant under equivalence") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 100; ++i) {
    const auto t = random_tt(rng), s = random_tt(rng);
    CHECK(t.compose(s).index() == t.index() + s.index());
  }
  for (int i = 0; i < 40; ++i) {
    const auto t = random_tt(rng);
    const auto s = t.compose(TailedTranslation::halfline_swap(Quad(0), Quad(2), Quad(1)));
    CHECK(t.equivalent(s));
    CHECK(s.index() == t.index());
    CHECK(t.disagreement_measure(s) < Quad(1000));
  }
  // maps with different tails are not equivalent
  CHECK(!TailedTranslation::halfline_shift(Quad(1)).equivalent(
      TailedTranslation::halfline_shift(Quad(2))));
  const auto t0 = TailedTranslation::halfline_shift(Quad(1));
  const auto mod = t0.compose(TailedTranslation::halfline_swap(Quad(0), Quad(3), Quad(2)));
  CHECK(t0.equivalent(mod));
}

TEST_CASE("charge index matches the dom/rng index") {
  CHECK(TailedTranslation::line_shift(Quad(0)).charge_index() == Quad(0));  // identity
  CHECK(TailedTranslation::line_shift(Quad(1)).charge_index() == Quad(1));
  // a partial map has no crossing picture
  CHECK_THROWS_AS(TailedTranslation::identity_on_halfline().charge_index(), error);

  // swap [-1,0) <-> [0,1): both set differences have measure 1, charge 0
  const auto sw = TailedTranslation::line_swap(Quad(-1), Quad(0), Quad(1));
  CHECK(sw.charge_index() == Quad(0));
  const auto r = sw.restrict_to_halfline();
  CHECK(r.index() == Quad(0));

  CHECK_THROWS_AS(
      TailedTranslation::make(Quad(1), {{{Quad(-1), Quad(1)}, Quad(0)}}, Quad(0), Quad(2))
          .charge_index(),
      error);

  std::mt19937_64 rng(26);
  for (int i = 0; i < 60; ++i) {
    // charge needs full line automorphisms: products of line swaps/shifts
    TailedTranslation t = TailedTranslation::line_shift(Quad(0));
    const int steps = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < steps; ++j) {
      if (rng() % 2 == 0) {
        t = t.compose(TailedTranslation::line_shift(Quad(Rational(static_cast<long>(rng() % 9) - 4, 3))));
      } else {
        const Quad a(Rational(static_cast<long>(rng() % 41) - 20, 4));
        const Quad b = a + Quad(1) + Quad(Rational(static_cast<long>(rng() % 12), 5));
        t = t.compose(TailedTranslation::line_swap(a, b, Quad(Rational(1 + static_cast<long>(rng() % 4), 5))));
      }
    }
    CHECK(t.charge_index() == t.restrict_to_halfline().index());
  }
}
