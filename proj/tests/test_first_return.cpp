#include "doctest.h"
#include "l1flow/first_return.hpp"
#include "l1flow/generators.hpp"

#include <random>

using namespace l1flow;

namespace {
FlowParams unit_flow() { return {}; }
Quad q(long n, long d = 1) { return Quad(Rational(n, d)); }
}

TEST_CASE("induced map: A containing the support returns T itself") {
  const FlowParams fp = unit_flow();
  const auto t = gen::grid_element(fp, 42);
  const auto res = induced_map(fp, t, RectSet::full(fp));
  CHECK(res.complete());
  CHECK(res.map == t);
}

TEST_CASE("induced map: period-2 swap induces the identity on one half") {
  const FlowParams fp = unit_flow();
  // swap two rectangles on the same column
  const RectSet a = RectSet::rect({q(0), q(1, 4)}, {q(0), q(1, 4)});
  const auto t = StepElement::from_pieces(
      fp, {{{q(0), q(1, 4)}, {q(0), q(1, 4)}, q(1, 2)},
           {{q(0), q(1, 4)}, {q(1, 2), q(3, 4)}, -q(1, 2)}});
  const auto res = induced_map(fp, t, a);
  CHECK(res.complete());
  CHECK(res.map == StepElement::identity());
  CHECK(res.max_steps == 2);
}

TEST_CASE("induced map never increases the norm") {
  const FlowParams fp = unit_flow();
  std::mt19937_64 rng(51);
  for (int i = 0; i < 25; ++i) {
    const auto t = gen::grid_element(fp, 5100 + i, 5);
    const auto a = gen::random_rects(fp, 6100 + i);
    const auto res = induced_map(fp, t, a);
    CHECK(res.complete());  // grid elements are periodic, everything resolves
    CHECK(res.map.norm_l1(fp) <= t.norm_l1(fp));
    // pointwise audit of the first-return property
    for (int j = 0; j < 40; ++j) {
      const FlowPoint x{q(static_cast<long>(rng() % 211), 211),
                        q(static_cast<long>(rng() % 101), 101)};
      if (!a.contains(x)) continue;
      FlowPoint y = t.apply(fp, x);
      long n = 1;
      while (!a.contains(y) && n < 4096) { y = t.apply(fp, y); ++n; }
      CHECK(res.map.apply(fp, x) == y);
    }
  }
}

TEST_CASE("intermitted map: cell-preserving elements are untouched") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  const auto rot = StepElement::cell_rotation(section, Rational(1, 3));
  const auto res = intermitted_map(tess, rot);
  CHECK(res.complete());
  CHECK(res.map == rot);
}

TEST_CASE("intermitted map of a flow shift against the section") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  // flow by the roof: every point leaves its cell and never returns (the
  // orbitwise translation is dissipative), so nothing resolves
  const auto t = StepElement::flow_shift(fp, q(1));
  const auto res = intermitted_map(tess, t, 64);
  CHECK(res.partial.empty());
  CHECK(res.residual.measure(fp) == q(1));
  // the norm inequality holds trivially on the resolved (empty) part
  CHECK(res.partial_norm(fp) <= t.norm_l1(fp));

  // flow by less than the gap: points near the top of the cell leave for
  // good, all others stay (n = 1)
  const auto s = StepElement::flow_shift(fp, q(1, 4));
  const auto res2 = intermitted_map(tess, s, 64);
  CHECK(res2.residual.measure(fp) == q(1, 4));
  CHECK(res2.residual == RectSet::rect({q(0), q(1)}, {q(3, 4), q(1)}));
  // the resolved part is exactly the shift on the lower band
  CHECK(pieces_domain(res2.partial) == RectSet::rect({q(0), q(1)}, {q(0), q(3, 4)}));
  for (const auto& p : res2.partial) CHECK(p.shift == q(1, 4));
  CHECK(res2.partial_norm(fp) == q(3, 16));
  CHECK(res2.partial_norm(fp) <= s.norm_l1(fp));
}

TEST_CASE("intermitted map of a periodic grid element resolves fully") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1, 2)));
  const Tessellation tess{section, TessKind::Canonical};
  for (int i = 0; i < 12; ++i) {
    const auto t = gen::grid_element(fp, 7200 + i, 4);
    const auto res = intermitted_map(tess, t, 1024);
    CHECK(res.complete());
    CHECK(res.map.norm_l1(fp) <= t.norm_l1(fp));
    // TEC estimate, restricted form: over Y = {Tx != T_RC x},
    // int_Y |rho_TRC| <= int_Y |rho_T|
    const RectSet y = StepElement::disagreement(fp, t, res.map);
    CHECK(res.map.norm_over(fp, y) <= t.norm_over(fp, y));
  }
}
