#ifndef L1FLOW_SRC_STRAND_HPP
#define L1FLOW_SRC_STRAND_HPP

// Internal tower-walk machinery shared by the castle and Hopf code: a
// strand is a rectangle in current coordinates carrying the affine link
// back to its origin slice.  Not installed.

#include <algorithm>
#include <deque>

#include "l1flow/step_element.hpp"

namespace l1flow::detail {

struct Strand {
  Interval cb, ch;    // current base and heights
  Quad ob_lo, oh_lo;  // origin corner
  Quad tau;           // accumulated shift
  long step = 0;
  long col = -1;      // optional origin tag

  RectSet origin_rect() const {
    return RectSet::rect({ob_lo, ob_lo + cb.length()}, {oh_lo, oh_lo + ch.length()});
  }
};

inline std::pair<Strand, Strand> split_base(const Strand& s, const Quad& x) {
  Strand l = s, r = s;
  l.cb.hi = x;
  r.cb.lo = x;
  r.ob_lo = s.ob_lo + (x - s.cb.lo);
  return {l, r};
}

inline std::pair<Strand, Strand> split_height(const Strand& s, const Quad& y) {
  Strand l = s, r = s;
  l.ch.hi = y;
  r.ch.lo = y;
  r.oh_lo = s.oh_lo + (y - s.ch.lo);
  return {l, r};
}

// Moves the strand by t, splitting at roof wraps and at the circle seam.
inline void move_strand(const FlowParams& fp, Strand s, const Quad& t, std::deque<Strand>& out) {
  const Quad h = fp.roof_q();
  const Quad one(Rational(1));
  s.tau += t;
  ++s.step;
  std::vector<Strand> bands;
  Quad lo = s.ch.lo + t;
  const Quad hi = s.ch.hi + t;
  while (true) {
    const Quad band_hi = (Quad(Rational((lo / h).floor())) + 1) * h;
    if (hi <= band_hi) {
      s.ch = {lo, hi};
      bands.push_back(s);
      break;
    }
    auto [l, r] = split_height(s, band_hi - t);
    l.ch = {lo, band_hi};
    bands.push_back(l);
    s = r;
    lo = band_hi;
  }
  for (auto& b : bands) {
    const Quad jq{Rational((b.ch.lo / h).floor())};
    b.ch.lo -= jq * h;
    b.ch.hi -= jq * h;
    const Quad shift = mod_one(jq * fp.alpha);
    const Quad nlo = b.cb.lo + shift, nhi = b.cb.hi + shift;
    if (nhi <= one) {
      b.cb = {nlo, nhi};
      out.push_back(b);
    } else if (nlo >= one) {
      b.cb = {nlo - one, nhi - one};
      out.push_back(b);
    } else {
      auto [l, r] = split_base(b, one - shift);
      l.cb = {l.cb.lo + shift, one};
      r.cb = {Quad(0), r.cb.hi + shift - one};
      out.push_back(l);
      out.push_back(r);
    }
  }
}

// Finds a piece containing the whole strand rectangle (fast path) or
// reports whether any piece overlaps it.  Pieces must have disjoint
// domains.
inline const StepPiece* find_piece(const PieceList& pieces, const Strand& s, bool& overlap) {
  overlap = false;
  for (const auto& p : pieces) {
    if (!(p.base.lo < s.cb.hi) || !(s.cb.lo < p.base.hi)) continue;
    if (!(p.height.lo < s.ch.hi) || !(s.ch.lo < p.height.hi)) continue;
    overlap = true;
    if (p.base.lo <= s.cb.lo && s.cb.hi <= p.base.hi && p.height.lo <= s.ch.lo &&
        s.ch.hi <= p.height.hi)
      return &p;
  }
  return nullptr;
}

// Splits the strand at some overlapping piece boundary strictly inside it;
// pushes both halves onto the queue.  Precondition: mixed coverage.
inline void split_at_boundary(const PieceList& pieces, const Strand& s, std::deque<Strand>& queue) {
  for (const auto& p : pieces) {
    if (!(p.base.lo < s.cb.hi) || !(s.cb.lo < p.base.hi)) continue;
    if (!(p.height.lo < s.ch.hi) || !(s.ch.lo < p.height.hi)) continue;
    for (const Quad* x : {&p.base.lo, &p.base.hi}) {
      if (s.cb.lo < *x && *x < s.cb.hi) {
        auto [l, r] = split_base(s, *x);
        queue.push_back(l);
        queue.push_back(r);
        return;
      }
    }
    for (const Quad* y : {&p.height.lo, &p.height.hi}) {
      if (s.ch.lo < *y && *y < s.ch.hi) {
        auto [l, r] = split_height(s, *y);
        queue.push_back(l);
        queue.push_back(r);
        return;
      }
    }
  }
  throw error("strand walk: inconsistent piece overlap");
}

// Sorted disjoint tagged intervals covering the circle; locates the part
// containing a strand base or reports the boundary to split at.
struct IntervalCover {
  std::vector<Interval> parts;
  std::vector<long> tags;

  long locate(const Interval& cb, Quad& split_at, bool& needs_split) const {
    auto it = std::upper_bound(parts.begin(), parts.end(), cb.lo,
                               [](const Quad& v, const Interval& p) { return v < p.lo; });
    if (it == parts.begin()) throw error("IntervalCover: point before the first part");
    --it;
    const std::size_t idx = static_cast<std::size_t>(it - parts.begin());
    if (cb.hi <= it->hi) {
      needs_split = false;
      return tags[idx];
    }
    needs_split = true;
    split_at = it->hi;
    return tags[idx];
  }
};

}  // namespace l1flow::detail

#endif
