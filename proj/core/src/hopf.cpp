#include "l1flow/hopf.hpp"

#include <algorithm>
#include <deque>

#include "strand.hpp"

namespace l1flow {

namespace {

using detail::Strand;

struct ScanOutcome {
  RectSet gone;   // the orbit provably leaves the support for good: it
                  // terminated (partial maps only; tower levels wander) or a
                  // monotone drift pushed it past every point of its cell
  RectSet cycle;  // returned to itself with zero accumulated shift
  RectSet open;   // horizon exhausted
};

ScanOutcome scan(const Tessellation& tess, const PieceList& pieces, const RectSet& start,
                 long horizon, bool drift_certified) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  // Once |tau| reaches the largest gap, a monotone orbit sits past every
  // point of its starting cell and can never re-enter it.
  const Quad drift_bound = Quad(Rational(c.max_return())) * fp.roof_q();

  PieceList sorted = pieces;
  std::sort(sorted.begin(), sorted.end(),
            [](const StepPiece& a, const StepPiece& b) { return a.base.lo < b.base.lo; });

  std::vector<std::pair<Interval, IntervalSet>> gone, cycle, open;
  std::deque<Strand> queue;
  for (const auto& [b, hs] : start.slabs())
    for (const auto& hp : hs.parts()) queue.push_back({b, hp, b.lo, hp.lo, Quad(0), 0});

  auto origin_slab = [](const Strand& s) {
    return std::pair<Interval, IntervalSet>{
        {s.ob_lo, s.ob_lo + s.cb.length()},
        IntervalSet::single(s.oh_lo, s.oh_lo + s.ch.length())};
  };
  while (!queue.empty()) {
    Strand s = queue.front();
    queue.pop_front();
    if (s.step > 0) {
      if (s.tau == Quad(0)) {
        cycle.push_back(origin_slab(s));
        continue;
      }
      if (drift_certified && !(s.tau.abs() < drift_bound)) {
        gone.push_back(origin_slab(s));
        continue;
      }
    }
    if (s.step >= horizon) {
      open.push_back(origin_slab(s));
      continue;
    }
    bool overlap = false;
    const StepPiece* hit = detail::find_piece(sorted, s, overlap);
    if (hit != nullptr) {
      detail::move_strand(fp, s, hit->shift, queue);
    } else if (!overlap) {
      // No piece applies.  A bijection never strands an orbit, so this only
      // happens for partial maps, whose tower levels are wandering.
      gone.push_back(origin_slab(s));
    } else {
      detail::split_at_boundary(sorted, s, queue);
    }
  }
  ScanOutcome out;
  out.gone = RectSet::from_slabs(std::move(gone));
  out.cycle = RectSet::from_slabs(std::move(cycle));
  out.open = RectSet::from_slabs(std::move(open));
  return out;
}

}  // namespace

HopfVerdict hopf_pieces(const Tessellation& tess, const PieceList& pieces, long horizon) {
  const FlowParams& fp = tess.section.params();
  StepElement probe;  // certificate needs only the piece signs; build leniently
  const auto cert_pieces = canonical_pieces(pieces, true);
  bool drift = true;
  {
    RectSet pos, neg, pos_img, neg_img;
    for (const auto& p : cert_pieces) {
      if (p.shift.sign() > 0) { pos = pos.unite(p.rect()); pos_img = pos_img.unite(p.rect().flowed(fp, p.shift)); }
      if (p.shift.sign() < 0) { neg = neg.unite(p.rect()); neg_img = neg_img.unite(p.rect().flowed(fp, p.shift)); }
    }
    if (!pos_img.intersect(neg).empty() || !neg_img.intersect(pos).empty()) drift = false;
  }

  const RectSet supp = pieces_domain(cert_pieces).unite(pieces_image(fp, cert_pieces));
  const ScanOutcome fwd = scan(tess, cert_pieces, supp, horizon, drift);
  const ScanOutcome bwd = scan(tess, partial_inverse(fp, cert_pieces), supp, horizon, drift);

  HopfVerdict v;
  v.horizon = horizon;
  v.conservative = fwd.cycle;
  v.dissipative = fwd.gone.intersect(bwd.gone).subtract(v.conservative);
  v.undecided = supp.subtract(v.conservative).subtract(v.dissipative);
  return v;
}

HopfVerdict hopf_decomposition(const Tessellation& tess, const StepElement& t, long horizon) {
  return hopf_pieces(tess, t.pieces(), horizon);
}

}  // namespace l1flow
