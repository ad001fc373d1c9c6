#include "l1flow/castle.hpp"

#include <algorithm>
#include <deque>

#include "strand.hpp"

namespace l1flow {

namespace {

using detail::Strand;
using detail::move_strand;
using detail::find_piece;
using detail::split_at_boundary;

struct Walk {
  std::vector<std::pair<Interval, IntervalSet>> visited;
  Quad visited_area;
  PieceList terminal;  // origin rect -> accumulated shift at the exit
  long height = 0;
  bool capped = false;
};

Walk walk_castle(const FlowParams& fp, const PieceList& pieces, const RectSet& seed, long cap,
                 bool keep_visited) {
  PieceList sorted = pieces;
  std::sort(sorted.begin(), sorted.end(),
            [](const StepPiece& a, const StepPiece& b) { return a.base.lo < b.base.lo; });

  Walk w;
  std::deque<Strand> queue;
  for (const auto& [b, hs] : seed.slabs())
    for (const auto& hp : hs.parts()) queue.push_back({b, hp, b.lo, hp.lo, Quad(0), 0});

  while (!queue.empty()) {
    Strand s = queue.front();
    queue.pop_front();
    if (s.step > cap) {
      w.capped = true;
      return w;
    }
    bool overlap = false;
    const StepPiece* hit = find_piece(sorted, s, overlap);
    if (hit != nullptr || !overlap) {
      // the rectangle moves (or exits) as one block: record the visit
      w.height = std::max(w.height, s.step + 1);
      if (keep_visited) {
        w.visited.push_back({s.cb, IntervalSet::single(s.ch.lo, s.ch.hi)});
        w.visited_area += s.cb.length() * s.ch.length();
      }
      if (hit != nullptr) {
        move_strand(fp, s, hit->shift, queue);
      } else {
        w.terminal.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                              {s.oh_lo, s.oh_lo + s.ch.length()},
                              s.tau});
      }
      continue;
    }
    split_at_boundary(sorted, s, queue);
  }
  return w;
}

}  // namespace

CastleReport castle_validate(const FlowParams& fp, const Castle& c, long cap) {
  CastleReport rep;
  Quad dom_area, img_area;
  RectSet dom, img;
  for (const auto& p : c.pieces) {
    dom_area += p.rect().area();
    dom = dom.unite(p.rect());
    const RectSet im = p.rect().flowed(fp, p.shift);
    img_area += im.area();
    img = img.unite(im);
  }
  if (dom_area != dom.area()) rep.violations.push_back("piece domains overlap");
  if (img_area != img.area()) rep.violations.push_back("piece images overlap (not injective)");
  if (!rep.violations.empty()) return rep;

  const RectSet basis = dom.subtract(img);
  if (basis.empty() && !c.pieces.empty()) {
    rep.violations.push_back("no basis reachable (the map contains a cycle)");
    return rep;
  }

  Walk w = walk_castle(fp, c.pieces, basis, cap, true);
  if (w.capped) {
    rep.violations.push_back("tower height cap exceeded");
    return rep;
  }
  const RectSet seen = RectSet::from_slabs(std::move(w.visited));
  if (w.visited_area != seen.area()) {
    rep.violations.push_back("basis iterates are not pairwise disjoint");
    return rep;
  }
  if (!(seen == dom.unite(img)))
    rep.violations.push_back("basis iterates do not cover the support");
  rep.height = w.height;
  rep.valid = rep.violations.empty();
  return rep;
}

PieceList vec_map(const FlowParams& fp, const Castle& c, long cap) {
  Walk w = walk_castle(fp, c.pieces, c.basis(fp), cap, false);
  if (w.capped) throw error("vec_map: column cap exceeded");
  return canonical_pieces(std::move(w.terminal), false);
}

Castle castle_union(const FlowParams& fp, const Castle& a, const Castle& b) {
  if (a.support(fp).intersects(b.support(fp)))
    throw error("castle_union: supports are not disjoint");
  Castle u;
  u.pieces = a.pieces;
  u.pieces.insert(u.pieces.end(), b.pieces.begin(), b.pieces.end());
  u.pieces = canonical_pieces(std::move(u.pieces), false);
  return u;
}

RectSet castle_saturation(const FlowParams& fp, const Castle& c, const RectSet& part, long cap) {
  Walk w = walk_castle(fp, c.pieces, part, cap, true);
  if (w.capped) throw error("castle_saturation: cap exceeded");
  return RectSet::from_slabs(std::move(w.visited));
}

}  // namespace l1flow
