#include "l1flow/first_return.hpp"

#include <algorithm>
#include <deque>

#include "strand.hpp"

namespace l1flow {

Quad FirstReturnResult::partial_norm(const FlowParams& fp) const {
  Quad n;
  for (const auto& p : partial) n += p.rect().area() * p.shift.abs();
  return n / fp.roof_q();
}

std::vector<OrbitAtom> pieces_step_atom(const FlowParams& fp, const PieceList& pieces,
                                        const OrbitAtom& a) {
  const RectSet cur = a.current(fp);
  std::vector<OrbitAtom> out;
  std::vector<std::pair<Interval, IntervalSet>> covered;
  for (const auto& [b, hs] : cur.slabs()) {
    for (const auto& p : pieces) {
      const Quad blo = b.lo < p.base.lo ? p.base.lo : b.lo;
      const Quad bhi = b.hi < p.base.hi ? b.hi : p.base.hi;
      if (!(blo < bhi)) continue;
      for (const auto& hp : hs.parts()) {
        const Quad hlo = hp.lo < p.height.lo ? p.height.lo : hp.lo;
        const Quad hhi = hp.hi < p.height.hi ? p.height.hi : hp.hi;
        if (!(hlo < hhi)) continue;
        covered.push_back({{blo, bhi}, IntervalSet::single(hlo, hhi)});
        const RectSet pulled = RectSet::rect({blo, bhi}, {hlo, hhi}).flowed(fp, -a.tau);
        for (const auto& [ob, ohs] : pulled.slabs())
          for (const auto& ohp : ohs.parts()) out.push_back({ob, ohp, a.tau + p.shift, a.col});
      }
    }
  }
  const RectSet rest = cur.subtract(RectSet::from_slabs(std::move(covered)));
  const RectSet pulled = rest.flowed(fp, -a.tau);
  for (const auto& [b, hs] : pulled.slabs())
    for (const auto& hp : hs.parts()) out.push_back({b, hp, a.tau, a.col});
  return out;
}

std::vector<OrbitAtom> step_atom(const FlowParams& fp, const StepElement& t, const OrbitAtom& a) {
  return pieces_step_atom(fp, t.pieces(), a);
}

namespace {

using detail::Strand;

std::pair<Interval, IntervalSet> origin_slab(const Strand& s) {
  return {{s.ob_lo, s.ob_lo + s.cb.length()},
          IntervalSet::single(s.oh_lo, s.oh_lo + s.ch.length())};
}

FirstReturnResult finish(const FlowParams& fp, PieceList resolved,
                         std::vector<std::pair<Interval, IntervalSet>> residual, long max_steps) {
  FirstReturnResult res;
  res.max_steps = max_steps;
  res.residual = RectSet::from_slabs(std::move(residual));
  res.partial = canonical_pieces(std::move(resolved), false);
  res.map = StepElement::identity();
  const PieceList nonzero = canonical_pieces(res.partial, true);
  if (StepElement::check_pieces(fp, nonzero).valid()) {
    res.map = StepElement::from_pieces(fp, nonzero);
    res.map_is_total = true;
  }
  return res;
}

}  // namespace

FirstReturnResult induced_map(const FlowParams& fp, const StepElement& t, const RectSet& a,
                              long cap) {
  PieceList marks;  // containment markers for A
  for (const auto& [b, hs] : a.slabs())
    for (const auto& hp : hs.parts()) marks.push_back({b, hp, Quad(0)});
  PieceList sorted = t.pieces();
  std::sort(sorted.begin(), sorted.end(),
            [](const StepPiece& x, const StepPiece& y) { return x.base.lo < y.base.lo; });

  PieceList resolved;
  std::vector<std::pair<Interval, IntervalSet>> residual;
  long max_steps = 0;
  std::deque<Strand> queue;
  for (const auto& m : marks)
    queue.push_back({m.base, m.height, m.base.lo, m.height.lo, Quad(0), 0});
  while (!queue.empty()) {
    Strand s = queue.front();
    queue.pop_front();
    if (s.step >= 1) {
      bool in_a = false;
      const StepPiece* mark = detail::find_piece(marks, s, in_a);
      if (mark != nullptr) {
        max_steps = std::max(max_steps, s.step);
        resolved.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                            {s.oh_lo, s.oh_lo + s.ch.length()},
                            s.tau});
        continue;
      }
      if (in_a) {
        detail::split_at_boundary(marks, s, queue);
        continue;
      }
    }
    if (s.step >= cap) {
      residual.push_back(origin_slab(s));
      continue;
    }
    bool overlap = false;
    const StepPiece* hit = detail::find_piece(sorted, s, overlap);
    if (hit != nullptr) {
      detail::move_strand(fp, s, hit->shift, queue);
    } else if (!overlap) {
      if (s.step == 0) {
        // fixed point of T inside A: it returns immediately, T_A = identity
        max_steps = std::max(max_steps, 1L);
        resolved.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                            {s.oh_lo, s.oh_lo + s.ch.length()},
                            Quad(0)});
      } else {
        // the orbit froze outside A and can never come back
        residual.push_back(origin_slab(s));
      }
    } else {
      detail::split_at_boundary(sorted, s, queue);
    }
  }
  return finish(fp, std::move(resolved), std::move(residual), max_steps);
}

FirstReturnResult intermitted_map(const Tessellation& tess, const StepElement& t, long cap) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  if (tess.kind != TessKind::Canonical)
    throw error("intermitted_map: only canonical tessellations are supported");

  detail::IntervalCover columns;
  for (const auto& p : c.column_partition()) {
    columns.parts.push_back(p.base);
    columns.tags.push_back(p.k);
  }
  PieceList sorted = t.pieces();
  std::sort(sorted.begin(), sorted.end(),
            [](const StepPiece& x, const StepPiece& y) { return x.base.lo < y.base.lo; });
  const Quad h = fp.roof_q();

  PieceList resolved;
  std::vector<std::pair<Interval, IntervalSet>> residual;
  long max_steps = 0;

  std::deque<Strand> queue;
  const RectSet supp = t.support();
  for (const auto& [b, hs] : supp.slabs())
    for (const auto& hp : hs.parts()) queue.push_back({b, hp, b.lo, hp.lo, Quad(0), 0});

  while (!queue.empty()) {
    Strand s = queue.front();
    queue.pop_front();
    // keep the strand within one column so cell comparisons are uniform
    Quad split_at;
    bool needs_split = false;
    const long col = columns.locate(s.cb, split_at, needs_split);
    if (needs_split) {
      auto [l, r] = detail::split_base(s, split_at);
      queue.push_back(l);
      queue.push_back(r);
      continue;
    }
    if (s.step == 0) {
      s.col = col;
    } else {
      // the orbit is back in its cell iff the wrap count matches the column drop
      const Quad jq = (s.oh_lo + s.tau - s.ch.lo) / h;
      if (Quad(Rational(col - s.col)) == jq) {
        max_steps = std::max(max_steps, s.step);
        resolved.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                            {s.oh_lo, s.oh_lo + s.ch.length()},
                            s.tau});
        continue;
      }
    }
    if (s.step >= cap) {
      residual.push_back(origin_slab(s));
      continue;
    }
    bool overlap = false;
    const StepPiece* hit = detail::find_piece(sorted, s, overlap);
    if (hit != nullptr) {
      detail::move_strand(fp, s, hit->shift, queue);
    } else if (!overlap) {
      residual.push_back(origin_slab(s));  // froze outside its cell
    } else {
      detail::split_at_boundary(sorted, s, queue);
    }
  }
  return finish(fp, std::move(resolved), std::move(residual), max_steps);
}

}  // namespace l1flow
