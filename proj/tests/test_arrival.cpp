#include "doctest.h"
#include "l1flow/generators.hpp"
#include "l1flow/hopf.hpp"
#include "l1flow/transport.hpp"

using namespace l1flow;

namespace {
FlowParams unit_flow() { return {}; }
Quad q(long n, long d = 1) { return Quad(Rational(n, d)); }
}

TEST_CASE("monotone certificate") {
  const FlowParams fp = unit_flow();
  CHECK(certify_monotone(fp, StepElement::flow_shift(fp, q(1, 3))).monotone);
  for (int i = 0; i < 8; ++i)
    CHECK(certify_monotone(fp, gen::monotone_bands(fp, 7300 + i)).monotone);
  // a cell rotation has both signs mixing within a cell
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  CHECK(!certify_monotone(fp, StepElement::cell_rotation(section, Rational(1, 3))).monotone);
}

TEST_CASE("arrival and departure of a small flow shift") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  const Quad t0 = q(1, 4);
  const auto t = StepElement::flow_shift(fp, t0);
  const auto ad = arrival_departure(tess, t);

  // all gaps are 1 > t: departure = top band, arrival = bottom band
  CHECK(ad.departure == RectSet::rect({q(0), q(1)}, {q(3, 4), q(1)}));
  CHECK(ad.arrival == RectSet::rect({q(0), q(1)}, {q(0), q(1, 4)}));
  CHECK(ad.departure_adjacent == ad.departure);  // gaps > shift: all jumps adjacent
  CHECK(ad.arrival_neg.empty());
  CHECK(ad.transfer_residual.empty());

  // transfer levels: from arrival height band [0,1/4) it takes 2 steps to
  // reach [3/4,1) at step values 0..2 -> t_C in {2} for [1/4-aligned bands}
  Quad covered;
  for (const auto& lvl : ad.levels) covered += pieces_domain(lvl.to_departure).measure(fp);
  CHECK(covered == ad.arrival.measure(fp));
  // tau_C maps arrival levels onto departures by T^n exactly
  for (const auto& lvl : ad.levels) {
    for (const auto& p : lvl.to_departure) {
      CHECK(p.shift == t0 * q(lvl.n));
    }
  }
}

TEST_CASE("identity has empty arrival/departure") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const auto ad = arrival_departure({section, TessKind::Canonical}, StepElement::identity());
  CHECK(ad.arrival.empty());
  CHECK(ad.departure.empty());
  CHECK(ad.levels.empty());
}

TEST_CASE("monotone band templates: transfer structure is exact") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  for (int i = 0; i < 6; ++i) {
    const auto t = gen::monotone_bands(fp, 7400 + i);
    const auto ad = arrival_departure(tess, t, 512);
    CHECK(ad.cert.monotone);
    CHECK(ad.transfer_residual.empty());
    CHECK(ad.arrival.measure(fp) == ad.departure.measure(fp));
    // tau_C is measure-preserving level by level and lands in departures
    const RectSet dep_img = partial_image(fp, ad.transfer(), ad.arrival);
    CHECK(dep_img == ad.departure);
    // pointwise: tau_C(x) = T^{t_C(x)} x
    for (const auto& lvl : ad.levels) {
      if (lvl.n > 3) continue;
      for (const auto& p : lvl.to_departure) {
        const FlowPoint x{(p.base.lo + p.base.hi) / q(2), (p.height.lo + p.height.hi) / q(2)};
        FlowPoint y = x;
        for (long k = 0; k < lvl.n; ++k) y = t.apply(fp, y);
        CHECK(flow_by(fp, x, p.shift) == y);
      }
    }
  }
}

TEST_CASE("jump profiles of band conveyors are constant at the flux") {
  const FlowParams fp = unit_flow();
  const auto section = sparse_section(fp, 3);
  const Tessellation tess{section, TessKind::Canonical};
  for (int i = 0; i < 6; ++i) {
    const auto t = gen::monotone_bands(fp, 7500 + i);
    const auto pos = jump_profile(tess, t, true);
    const auto neg = jump_profile(tess, t, false);
    REQUIRE(!pos.empty());
    const Quad flux = pos.front().second;
    CHECK(flux > q(0));
    for (const auto& [atom, z] : pos) CHECK(z == flux);
    for (const auto& [atom, z] : neg) CHECK(z == flux);  // index zero: equal flux
  }
}

TEST_CASE("hopf: cell rotation is conservative") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  const auto rot = StepElement::cell_rotation(section, Rational(1, 3));
  const auto v = hopf_decomposition(tess, rot, 16);
  CHECK(v.dissipative.empty());
  CHECK(v.undecided.empty());
  CHECK(v.conservative == rot.support());
}

TEST_CASE("hopf: flow shifts and monotone bands are dissipative") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  const auto t = StepElement::flow_shift(fp, q(1, 4));
  // horizon ceil(gap/t)+1 suffices for the drift certificate
  const auto v = hopf_decomposition(tess, t, 5);
  CHECK(v.conservative.empty());
  CHECK(v.undecided.empty());
  CHECK(v.dissipative == RectSet::full(fp));

  for (int i = 0; i < 5; ++i) {
    const auto b = gen::monotone_bands(fp, 7600 + i);
    const auto vb = hopf_decomposition(tess, b, 128);
    CHECK(vb.conservative.empty());
    CHECK(vb.undecided.empty());
    CHECK(vb.dissipative == b.support());
  }
}

TEST_CASE("hopf: grid elements are conservative (periodic)") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};
  for (int i = 0; i < 8; ++i) {
    const auto t = gen::grid_element(fp, 7700 + i);
    const auto v = hopf_decomposition(tess, t, 1024);
    CHECK(v.dissipative.empty());
    CHECK(v.undecided.empty());
    CHECK(v.conservative == t.support());
  }
}

TEST_CASE("fiber transport") {
  const FlowParams fp = unit_flow();
  const auto section = CrossSection::build(fp, IntervalSet::single(q(0), q(1)));
  const Tessellation tess{section, TessKind::Canonical};

  // translation within one cell
  const RectSet e = RectSet::rect({q(0), q(1)}, {q(0), q(1, 4)});
  const RectSet f = RectSet::rect({q(0), q(1)}, {q(1, 2), q(3, 4)});
  const auto tr = fiber_transport(tess, e, f);
  REQUIRE(tr.size() == 1);
  CHECK(tr[0].shift == q(1, 2));
  CHECK(partial_image(fp, tr, e) == f);

  // E = F gives the identity
  for (const auto& p : fiber_transport(tess, e, e)) CHECK(p.shift == q(0));

  // multi-interval sets: image audited exactly
  const RectSet e2 = RectSet::rect({q(0), q(1)}, {q(0), q(1, 8)})
                         .unite(RectSet::rect({q(0), q(1)}, {q(1, 2), q(5, 8)}));
  const RectSet f2 = RectSet::rect({q(0), q(1)}, {q(1, 4), q(1, 2)});
  const auto tr2 = fiber_transport(tess, e2, f2);
  CHECK(partial_image(fp, tr2, e2) == f2);
  CHECK(pieces_domain(tr2) == e2);

  // mismatched fibers are rejected
  CHECK_THROWS_AS(fiber_transport(tess, e, f2.unite(RectSet::rect({q(0), q(1, 2)}, {q(7, 8), q(1)}))),
                  error);
}
