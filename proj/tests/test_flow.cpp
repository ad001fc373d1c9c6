#include "doctest.h"
#include "l1flow/flow.hpp"

#include <random>

using namespace l1flow;

namespace {
FlowParams unit_flow() { return FlowParams{}; }  // alpha = sqrt2-1, roof 1

Quad q(long n, long d = 1) { return Quad(Rational(n, d)); }
}

TEST_CASE("flow_by wraps exactly") {
  const FlowParams fp = unit_flow();
  const Quad a = fp.alpha;

  // one wrap from the section
  CHECK(flow_by(fp, {q(0), q(0)}, q(1)) == FlowPoint{a, q(0)});
  // stay inside the fiber
  CHECK(flow_by(fp, {q(1, 2), q(1, 4)}, q(1, 4)) == FlowPoint{q(1, 2), q(1, 2)});
  // three wraps
  CHECK(flow_by(fp, {q(0), q(0)}, q(3) + q(1, 2)) ==
        FlowPoint{mod_one(q(3) * a), q(1, 2)});
  // inverse property on random points
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const FlowPoint x{q(static_cast<long>(rng() % 97), 97), q(static_cast<long>(rng() % 89), 89)};
    const Quad t = q(static_cast<long>(rng() % 41) - 20, 7);
    CHECK(flow_by(fp, flow_by(fp, x, t), -t) == x);
  }
}

TEST_CASE("orbit_time recovers the cocycle") {
  const FlowParams fp = unit_flow();
  const Quad a = fp.alpha;
  CHECK(orbit_time(fp, {q(0), q(0)}, {a, q(0)}) == q(1));
  CHECK(!orbit_time(fp, {q(0), q(0)}, {q(1, 3), q(0)}).has_value());
  CHECK(orbit_time(fp, {q(0), q(1, 4)}, {mod_one(q(2) * a), q(1, 4)}) == q(2));

  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const FlowPoint x{q(static_cast<long>(rng() % 101), 101), q(static_cast<long>(rng() % 7), 7)};
    const Quad t = q(static_cast<long>(rng() % 61) - 30, 11);
    CHECK(orbit_time(fp, x, flow_by(fp, x, t)) == t);
  }
}

TEST_CASE("cross section: full circle") {
  const FlowParams fp = unit_flow();
  const auto c = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  REQUIRE(c.returns().size() == 1);
  CHECK(c.returns()[0].k == 1);
  CHECK(c.gap(q(1, 3)) == q(1));
  CHECK(c.kac_sum() == q(1));
}

TEST_CASE("cross section: half circle has return counts {1,2,3}") {
  const FlowParams fp = unit_flow();
  const auto c = CrossSection::build(fp, IntervalSet::single(q(0), q(1, 2)));
  CHECK(c.kac_sum() == q(1));
  bool seen[4] = {false, false, false, false};
  for (const auto& p : c.returns()) {
    REQUIRE(p.k <= 3);
    seen[p.k] = true;
  }
  CHECK(seen[1]);
  CHECK(seen[2]);
  CHECK(seen[3]);

  // brute-force orbit iteration oracle on sampled thetas
  std::mt19937_64 rng(33);
  for (int i = 0; i < 1000; ++i) {
    const Quad theta = q(static_cast<long>(rng() % 499), 1000);  // inside [0, 1/2)
    long k = 1;
    Quad pos = mod_one(theta + fp.alpha);
    while (!(pos < q(1, 2))) {
      pos = mod_one(pos + fp.alpha);
      ++k;
    }
    CHECK(c.return_count(theta) == k);
  }
}

TEST_CASE("cross section: small base satisfies the Kac identity") {
  const FlowParams fp = unit_flow();
  const auto c = CrossSection::build(fp, IntervalSet::single(q(0), q(1, 32)));
  CHECK(c.kac_sum() == q(1));
  CHECK(c.min_return() >= 2);
}

TEST_CASE("projection onto tessellation cells") {
  const FlowParams fp = unit_flow();
  const Tessellation tess{CrossSection::build(fp, IntervalSet::single(q(0), q(1))),
                          TessKind::Canonical};
  // a section point projects to itself
  auto [c0, u0] = project(tess, {q(1, 4), q(0)});
  CHECK(c0.theta == q(1, 4));
  CHECK(u0 == q(0));
  auto [c1, u1] = project(tess, {q(1, 2), q(3, 4)});
  CHECK(c1.theta == q(1, 2));
  CHECK(u1 == q(3, 4));

  // project(c + u) = (c, u) for exact offsets within the gap
  const Tessellation half{CrossSection::build(fp, IntervalSet::single(q(0), q(1, 2))),
                          TessKind::Canonical};
  std::mt19937_64 rng(34);
  for (int i = 0; i < 300; ++i) {
    const Quad theta = q(static_cast<long>(rng() % 499), 1000);
    const FlowPoint c{theta, q(0)};
    const Quad g = half.section.gap(theta);
    const Quad u = g * q(static_cast<long>(rng() % 53), 53);
    auto [cc, uu] = project(half, flow_by(fp, c, u));
    CHECK(cc.theta == theta);
    CHECK(uu == u);
  }

  // Voronoi: equidistant points attach to the earlier section point
  const Tessellation vor{tess.section, TessKind::Voronoi};
  auto [cv, uv] = project(vor, {q(1, 4), q(1, 2)});
  CHECK(cv.theta == q(1, 4));
  CHECK(uv == q(1, 2));
  auto [cv2, uv2] = project(vor, {q(1, 4), q(3, 4)});  // nearer to the next point
  CHECK(cv2.theta == mod_one(q(1, 4) + fp.alpha));
  CHECK(uv2 == -q(1, 4));
}

TEST_CASE("rect sets: algebra and flow images") {
  const FlowParams fp = unit_flow();
  const RectSet a = RectSet::rect({q(0), q(1, 2)}, {q(0), q(1, 4)});
  const RectSet b = RectSet::rect({q(1, 4), q(3, 4)}, {q(1, 8), q(1, 2)});
  CHECK(a.unite(b).area() + a.intersect(b).area() == a.area() + b.area());
  CHECK(a.subtract(b).unite(a.intersect(b)) == a);

  std::mt19937_64 rng(35);
  for (int i = 0; i < 100; ++i) {
    const Quad lo = q(static_cast<long>(rng() % 80), 100);
    const RectSet r = RectSet::rect({lo, lo + q(1, 8)},
                                    {q(static_cast<long>(rng() % 3), 4), q(3 + static_cast<long>(rng() % 2), 4)});
    const Quad t = q(static_cast<long>(rng() % 31) - 15, 8);
    const RectSet moved = r.flowed(fp, t);
    CHECK(moved.area() == r.area());               // flow preserves mu
    CHECK(moved.flowed(fp, -t) == r);              // and is invertible
  }
}

TEST_CASE("segment and fiber measures") {
  const FlowParams fp = unit_flow();
  const Tessellation tess{CrossSection::build(fp, IntervalSet::single(q(0), q(1, 2))),
                          TessKind::Canonical};
  // whole cell
  const RectSet full = RectSet::full(fp);
  for (long n : {1L, 5L, 9L}) {
    const Quad theta = q(n, 20);
    CHECK(fiber_measure(tess, full, theta) == tess.section.gap(theta));
    CHECK(fiber_measure(tess, RectSet(), theta) == q(0));
  }

  // one rectangle straddling two wraps of a k>=2 cell: sum of two heights
  Quad theta2;
  bool found = false;
  for (const auto& rp : tess.section.returns()) {
    if (rp.k >= 2) { theta2 = (rp.base.lo + rp.base.hi) / q(2); found = true; break; }
  }
  REQUIRE(found);
  const Quad th1 = mod_one(theta2 + fp.alpha);
  const RectSet straddle = RectSet::rect({theta2, theta2 + q(1, 1000)}, {q(1, 2), q(1)})
                               .unite(RectSet::rect({th1, th1 + q(1, 1000)}, {q(0), q(1, 4)}));
  const Quad lam = fiber_measure(tess, straddle, theta2);
  CHECK(lam == q(1, 2) + q(1, 4));

  // profile is consistent with pointwise fiber measures
  const auto prof = fiber_profile(tess, straddle);
  Quad covered;
  for (const auto& [atom, lam_c] : prof) {
    covered += atom.length();
    const Quad mid = (atom.lo + atom.hi) / q(2);
    CHECK(fiber_measure(tess, straddle, mid) == lam_c);
  }
  CHECK(covered == tess.section.base().measure());
}

TEST_CASE("Voronoi cells partition the space") {
  const FlowParams fp = unit_flow();
  for (long den : {1L, 2L, 5L, 16L}) {
    const auto c = CrossSection::build(fp, IntervalSet::single(q(0), q(1, den)));
    CHECK(voronoi_cell_measure_sum(c) == q(1));
  }
}

TEST_CASE("lacunary partition") {
  const FlowParams fp = unit_flow();
  const auto c = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));

  // min gap > V: singleton
  const auto single = lacunary_partition(c, q(1, 2));
  CHECK(single.size() == 1);

  // V = 3/2: classes have gaps >= 2h, verified exactly piece by piece
  const auto classes = lacunary_partition(c, q(3, 2));
  CHECK(classes.size() <= 3);  // ceil(V/h) + 1
  IntervalSet total;
  for (const auto& cls : classes) {
    CHECK(cls.min_return() >= 2);
    CHECK(Quad(Rational(cls.min_return())) * fp.roof_q() > q(3, 2));
    CHECK(total.intersect(cls.base()).empty());
    total = total.unite(cls.base());
  }
  CHECK(total == c.base());

  // a coarser V on a finer section
  const auto fine = CrossSection::build(fp, IntervalSet::single(q(0), q(1, 4)));
  const auto classes2 = lacunary_partition(fine, q(7, 2));
  IntervalSet total2;
  for (const auto& cls : classes2) {
    CHECK(Quad(Rational(cls.min_return())) * fp.roof_q() > q(7, 2));
    CHECK(total2.intersect(cls.base()).empty());
    total2 = total2.unite(cls.base());
  }
  CHECK(total2 == fine.base());
}

TEST_CASE("sparse sections reach requested gaps") {
  const FlowParams fp = unit_flow();
  const auto c = sparse_section(fp, 12);
  CHECK(c.min_return() >= 12);
  CHECK(c.kac_sum() == q(1));
}
