#include "l1flow/transport.hpp"

#include <algorithm>

namespace l1flow {

namespace {
Quad qmin(const Quad& x, const Quad& y) { return x < y ? x : y; }
Quad qmax(const Quad& x, const Quad& y) { return x < y ? y : x; }

std::pair<Quad, Quad> cell_offset_range(const Tessellation& tess, const Quad& theta) {
  const CrossSection& c = tess.section;
  if (tess.kind == TessKind::Canonical) return {Quad(0), c.gap(theta)};
  const Quad two(Rational(2));
  return {-(c.gap_prev(theta) / two), c.gap(theta) / two};
}
}  // namespace

std::vector<Interval> segments_in_cell(const Tessellation& tess, const RectSet& a,
                                       const Quad& theta) {
  const FlowParams& fp = tess.section.params();
  const Quad h = fp.roof_q();
  const auto [off_lo, off_hi] = cell_offset_range(tess, theta);
  std::vector<Interval> segs;
  for (BigInt j = (off_lo / h).floor(); Quad(Rational(j)) * h < off_hi; ++j) {
    const Quad jq{Rational(j)};
    const Quad lo = qmax(off_lo, jq * h), hi = qmin(off_hi, (jq + 1) * h);
    if (!(lo < hi)) continue;
    const Quad th = mod_one(theta + jq * fp.alpha);
    const IntervalSet hs =
        a.heights_at(th).intersect(IntervalSet::single(lo - jq * h, hi - jq * h));
    for (const auto& hp : hs.parts()) segs.push_back({jq * h + hp.lo, jq * h + hp.hi});
  }
  return segs;  // ordered along the orbit by construction
}

PieceList fiber_transport(const Tessellation& tess, const RectSet& e, const RectSet& f) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  const Quad h = fp.roof_q();

  // Refine the section base so both sets have constant cell structure.
  std::vector<Quad> cuts;
  const long span = c.max_return() + (tess.kind == TessKind::Voronoi ? c.max_return() : 0) + 1;
  for (const RectSet* s : {&e, &f}) {
    for (const auto& q : s->base_breakpoints())
      for (long j = -span; j <= span; ++j)
        cuts.push_back(mod_one(q - Quad(Rational(j)) * fp.alpha));
  }
  for (const auto& bp : c.back_returns()) { cuts.push_back(bp.base.lo); cuts.push_back(bp.base.hi); }

  PieceList out;
  for (const auto& rp : c.returns()) {
    for (const auto& atom : refine_intervals({rp.base}, cuts)) {
      const Quad mid = (atom.lo + atom.hi) / Quad(2);
      auto se = segments_in_cell(tess, e, mid);
      auto sf = segments_in_cell(tess, f, mid);
      Quad total_e, total_f;
      for (const auto& s : se) total_e += s.length();
      for (const auto& s : sf) total_f += s.length();
      if (total_e != total_f) throw error("fiber_transport: fibers are not equimeasurable");
      // order-preserving matching by a two-pointer sweep
      std::size_t i = 0, j = 0;
      Quad ei, fj;  // consumed prefixes of the current segments
      while (i < se.size() && j < sf.size()) {
        const Quad avail_e = se[i].length() - ei;
        const Quad avail_f = sf[j].length() - fj;
        const Quad len = qmin(avail_e, avail_f);
        const Quad ea = se[i].lo + ei, fa = sf[j].lo + fj;
        // emit the matched block: source offsets [ea, ea+len) in the cell of
        // every point of `atom`; zero-shift blocks stay so the partial map
        // is total on E
        const BigInt wrap = (ea / h).floor();
        const Quad wq{Rational(wrap)};
        const IntervalSet bases =
            circle_translate(IntervalSet::single(atom.lo, atom.hi), wq * fp.alpha);
        for (const auto& b : bases.parts())
          out.push_back({b, {ea - wq * h, ea - wq * h + len}, fa - ea});
        ei += len;
        fj += len;
        if (ei == se[i].length()) { ++i; ei = Quad(0); }
        if (fj == sf[j].length()) { ++j; fj = Quad(0); }
      }
    }
  }
  return canonical_pieces(std::move(out), false);
}

}  // namespace l1flow
