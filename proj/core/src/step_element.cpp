#include "l1flow/step_element.hpp"

#include <algorithm>
#include <map>

namespace l1flow {

namespace {
struct QuadLess {
  bool operator()(const Quad& x, const Quad& y) const { return x < y; }
};
Quad qmin(const Quad& x, const Quad& y) { return x < y ? x : y; }
Quad qmax(const Quad& x, const Quad& y) { return x < y ? y : x; }
}  // namespace

RectSet pieces_domain(const PieceList& pieces) {
  RectSet d;
  for (const auto& p : pieces) d = d.unite(p.rect());
  return d;
}

RectSet pieces_image(const FlowParams& fp, const PieceList& pieces) {
  RectSet im;
  for (const auto& p : pieces) im = im.unite(p.rect().flowed(fp, p.shift));
  return im;
}

namespace {

// Appends the flow image of one rectangle to a slab list; O(1) per band.
void emit_flowed(const FlowParams& fp, const Interval& base, const Interval& height,
                 const Quad& shift, std::vector<std::pair<Interval, IntervalSet>>& slabs) {
  const Quad h = fp.roof_q();
  const Quad lo = height.lo + shift, hi = height.hi + shift;
  for (BigInt j = (lo / h).floor(); Quad(Rational(j)) * h < hi; ++j) {
    const Quad jq{Rational(j)};
    const Quad band_lo = lo < jq * h ? jq * h : lo;
    const Quad band_hi = hi < (jq + 1) * h ? hi : (jq + 1) * h;
    if (!(band_lo < band_hi)) continue;
    const IntervalSet moved = circle_translate(IntervalSet::single(base.lo, base.hi), jq * fp.alpha);
    for (const auto& mb : moved.parts())
      slabs.push_back({mb, IntervalSet::single(band_lo - jq * h, band_hi - jq * h)});
  }
}

}  // namespace

RectSet partial_image(const FlowParams& fp, const PieceList& pieces, const RectSet& a) {
  std::vector<std::pair<Interval, IntervalSet>> slabs;
  for (const auto& [b, hs] : a.slabs()) {
    for (const auto& p : pieces) {
      const Quad blo = b.lo < p.base.lo ? p.base.lo : b.lo;
      const Quad bhi = b.hi < p.base.hi ? b.hi : p.base.hi;
      if (!(blo < bhi)) continue;
      for (const auto& hp : hs.parts()) {
        const Quad hlo = hp.lo < p.height.lo ? p.height.lo : hp.lo;
        const Quad hhi = hp.hi < p.height.hi ? hp.hi : p.height.hi;
        if (!(hlo < hhi)) continue;
        emit_flowed(fp, {blo, bhi}, {hlo, hhi}, p.shift, slabs);
      }
    }
  }
  return RectSet::from_slabs(std::move(slabs));
}

PieceList partial_inverse(const FlowParams& fp, const PieceList& pieces) {
  PieceList out;
  for (const auto& p : pieces) {
    const RectSet img = p.rect().flowed(fp, p.shift);
    for (const auto& [b, hs] : img.slabs())
      for (const auto& hp : hs.parts()) out.push_back({b, hp, -p.shift});
  }
  return canonical_pieces(std::move(out), false);
}

PieceList partial_compose(const FlowParams& fp, const PieceList& outer, const PieceList& inner) {
  PieceList out;
  for (const auto& pi : inner) {
    const RectSet moved = pi.rect().flowed(fp, pi.shift);
    for (const auto& po : outer) {
      const RectSet ov = moved.intersect(po.rect());
      if (ov.empty()) continue;
      const RectSet pulled = ov.flowed(fp, -pi.shift);
      for (const auto& [b, hs] : pulled.slabs())
        for (const auto& hp : hs.parts()) out.push_back({b, hp, pi.shift + po.shift});
    }
  }
  return canonical_pieces(std::move(out), false);
}

PieceList partial_restrict(const FlowParams& fp, const PieceList& pieces, const RectSet& dom) {
  (void)fp;
  PieceList out;
  for (const auto& p : pieces) {
    const RectSet part = p.rect().intersect(dom);
    for (const auto& [b, hs] : part.slabs())
      for (const auto& hp : hs.parts()) out.push_back({b, hp, p.shift});
  }
  return canonical_pieces(std::move(out), false);
}

PieceList canonical_pieces(PieceList pieces, bool drop_zero_shift) {
  std::map<Quad, RectSet, QuadLess> by_shift;
  for (auto& p : pieces) {
    if (drop_zero_shift && p.shift.sign() == 0) continue;
    if (!(p.base.lo < p.base.hi) || !(p.height.lo < p.height.hi)) continue;
    auto [it, fresh] = by_shift.try_emplace(p.shift, RectSet());
    it->second = it->second.unite(p.rect());
  }
  PieceList out;
  for (const auto& [shift, rs] : by_shift) {
    for (const auto& [b, hs] : rs.slabs())
      for (const auto& hp : hs.parts()) out.push_back({b, hp, shift});
  }
  std::sort(out.begin(), out.end(), [](const StepPiece& x, const StepPiece& y) {
    if (x.base.lo != y.base.lo) return x.base.lo < y.base.lo;
    return x.height.lo < y.height.lo;
  });
  return out;
}

ValidationReport StepElement::check_pieces(const FlowParams& fp, const PieceList& pieces) {
  ValidationReport rep;
  const Quad one(Rational(1));
  const Quad h = fp.roof_q();
  Quad dom_area, img_area;
  RectSet dom, img;
  for (const auto& p : pieces) {
    if (!(p.base.lo < p.base.hi) || !(p.height.lo < p.height.hi))
      rep.violations.push_back("degenerate piece");
    if (p.base.lo < Quad() || one < p.base.hi) rep.violations.push_back("piece base outside [0,1)");
    if (p.height.lo < Quad() || h < p.height.hi)
      rep.violations.push_back("piece height outside [0,roof)");
    dom_area += p.rect().area();
    dom = dom.unite(p.rect());
    const RectSet im = p.rect().flowed(fp, p.shift);
    img_area += im.area();
    img = img.unite(im);
  }
  if (dom_area != dom.area()) rep.violations.push_back("piece domains overlap");
  if (img_area != img.area()) rep.violations.push_back("piece images overlap");
  if (!(dom == img)) rep.violations.push_back("image union differs from domain union");
  return rep;
}

StepElement StepElement::from_pieces(const FlowParams& fp, PieceList pieces) {
  StepElement t;
  t.pieces_ = canonical_pieces(std::move(pieces), true);
  const auto rep = t.validate(fp);
  if (!rep.valid()) {
    std::string msg = "StepElement:";
    for (const auto& v : rep.violations) msg += " " + v + ";";
    throw error(msg);
  }
  return t;
}

StepElement StepElement::flow_shift(const FlowParams& fp, const Quad& t) {
  if (t.sign() == 0) return identity();
  return from_pieces(fp, {{{Quad(), Quad(Rational(1))}, {Quad(), fp.roof_q()}, t}});
}

RectSet cell_offsets(const CrossSection& c, const Interval& atom, const Quad& a, const Quad& b) {
  const FlowParams& fp = c.params();
  const Quad h = fp.roof_q();
  RectSet out;
  for (BigInt j = (a / h).floor(); Quad(Rational(j)) * h < b; ++j) {
    const Quad jq{Rational(j)};
    const Quad lo = qmax(a, jq * h), hi = qmin(b, (jq + 1) * h);
    if (!(lo < hi)) continue;
    const IntervalSet bases =
        circle_translate(IntervalSet::single(atom.lo, atom.hi), jq * fp.alpha);
    for (const auto& bp : bases.parts())
      out = out.unite(RectSet::rect(bp, {lo - jq * h, hi - jq * h}));
  }
  return out;
}

StepElement StepElement::cell_rotation(const CrossSection& c, const Rational& frac) {
  if (!(0 < frac && frac < 1)) throw error("cell_rotation: fraction must be in (0,1)");
  const FlowParams& fp = c.params();
  PieceList pieces;
  const Quad f{frac};
  for (const auto& rp : c.returns()) {
    const Quad g = Quad(fp.roof) * Quad(Rational(rp.k));
    const Quad cut = (Quad(Rational(1)) - f) * g;
    const RectSet lower = cell_offsets(c, rp.base, Quad(), cut);
    for (const auto& [b, hs] : lower.slabs())
      for (const auto& hp : hs.parts()) pieces.push_back({b, hp, f * g});
    const RectSet upper = cell_offsets(c, rp.base, cut, g);
    for (const auto& [b, hs] : upper.slabs())
      for (const auto& hp : hs.parts()) pieces.push_back({b, hp, -cut});
  }
  return from_pieces(fp, std::move(pieces));
}

FlowPoint StepElement::apply(const FlowParams& fp, const FlowPoint& x) const {
  for (const auto& p : pieces_)
    if (p.base.contains(x.theta) && p.height.contains(x.s)) return flow_by(fp, x, p.shift);
  return x;
}

FlowPoint StepElement::apply_inverse(const FlowParams& fp, const FlowPoint& x) const {
  for (const auto& p : pieces_) {
    const FlowPoint pre = flow_by(fp, x, -p.shift);
    if (p.base.contains(pre.theta) && p.height.contains(pre.s)) return pre;
  }
  return x;
}

Quad StepElement::cocycle(const FlowPoint& x) const {
  for (const auto& p : pieces_)
    if (p.base.contains(x.theta) && p.height.contains(x.s)) return p.shift;
  return {};
}

StepElement StepElement::compose(const FlowParams& fp, const StepElement& inner) const {
  PieceList out;
  const RectSet inner_dom = inner.domain_cells();
  for (const auto& pi : inner.pieces_) {
    const RectSet moved = pi.rect().flowed(fp, pi.shift);
    RectSet rest = moved;
    for (const auto& po : pieces_) {
      const RectSet ov = moved.intersect(po.rect());
      if (ov.empty()) continue;
      rest = rest.subtract(ov);
      const RectSet pulled = ov.flowed(fp, -pi.shift);
      for (const auto& [b, hs] : pulled.slabs())
        for (const auto& hp : hs.parts()) out.push_back({b, hp, pi.shift + po.shift});
    }
    const RectSet pulled = rest.flowed(fp, -pi.shift);
    for (const auto& [b, hs] : pulled.slabs())
      for (const auto& hp : hs.parts()) out.push_back({b, hp, pi.shift});
  }
  for (const auto& po : pieces_) {
    const RectSet fresh = po.rect().subtract(inner_dom);
    for (const auto& [b, hs] : fresh.slabs())
      for (const auto& hp : hs.parts()) out.push_back({b, hp, po.shift});
  }
  return from_pieces(fp, std::move(out));
}

StepElement StepElement::inverse(const FlowParams& fp) const {
  return from_pieces(fp, partial_inverse(fp, pieces_));
}

StepElement StepElement::conjugate(const FlowParams& fp, const StepElement& other) const {
  return compose(fp, other.compose(fp, inverse(fp)));
}

Quad StepElement::norm_l1(const FlowParams& fp) const {
  Quad n;
  for (const auto& p : pieces_) n += p.rect().area() * p.shift.abs();
  return n / fp.roof_q();
}

Quad StepElement::index(const FlowParams& fp) const {
  Quad n;
  for (const auto& p : pieces_) n += p.rect().area() * p.shift;
  return n / fp.roof_q();
}

Quad StepElement::max_abs_shift() const {
  Quad m;
  for (const auto& p : pieces_) m = qmax(m, p.shift.abs());
  return m;
}

bool StepElement::operator==(const StepElement& o) const {
  if (pieces_.size() != o.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& a = pieces_[i];
    const auto& b = o.pieces_[i];
    if (a.base.lo != b.base.lo || a.base.hi != b.base.hi || a.height.lo != b.height.lo ||
        a.height.hi != b.height.hi || a.shift != b.shift)
      return false;
  }
  return true;
}

Quad StepElement::norm_over(const FlowParams& fp, const RectSet& a) const {
  Quad n;
  for (const auto& p : pieces_) n += p.rect().intersect(a).area() * p.shift.abs();
  return n / fp.roof_q();
}

Quad StepElement::distance_l1(const FlowParams& fp, const StepElement& t, const StepElement& s) {
  Quad total;
  const RectSet sd = s.domain_cells(), td = t.domain_cells();
  for (const auto& pt : t.pieces_) {
    total += pt.rect().subtract(sd).area() * pt.shift.abs();
    for (const auto& ps : s.pieces_)
      total += pt.rect().intersect(ps.rect()).area() * (pt.shift - ps.shift).abs();
  }
  for (const auto& ps : s.pieces_) total += ps.rect().subtract(td).area() * ps.shift.abs();
  return total / fp.roof_q();
}

RectSet StepElement::disagreement(const FlowParams& fp, const StepElement& t,
                                  const StepElement& s) {
  (void)fp;
  RectSet out;
  const RectSet sd = s.domain_cells(), td = t.domain_cells();
  for (const auto& pt : t.pieces_) {
    out = out.unite(pt.rect().subtract(sd));
    for (const auto& ps : s.pieces_)
      if (pt.shift != ps.shift) out = out.unite(pt.rect().intersect(ps.rect()));
  }
  for (const auto& ps : s.pieces_) out = out.unite(ps.rect().subtract(td));
  return out;
}

}  // namespace l1flow
