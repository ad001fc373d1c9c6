#include "l1flow/decompositions.hpp"

#include <algorithm>
#include <deque>

#include "strand.hpp"

namespace l1flow {

std::vector<CycleAtom> cycle_structure(const FlowParams& fp, const StepElement& t, long cap) {
  PieceList sorted = t.pieces();
  std::sort(sorted.begin(), sorted.end(),
            [](const StepPiece& x, const StepPiece& y) { return x.base.lo < y.base.lo; });

  // Walk every support strand until it returns to itself (tau == 0); the
  // visited slices along the way are the cycle positions.
  struct Tracked {
    detail::Strand s;
    PieceList visited;  // origin rect at each position with its shift
  };
  std::vector<CycleAtom> cycles;
  std::deque<Tracked> queue;
  const RectSet supp = t.support();
  for (const auto& [b, hs] : supp.slabs())
    for (const auto& hp : hs.parts())
      queue.push_back({{b, hp, b.lo, hp.lo, Quad(0), 0}, {}});

  while (!queue.empty()) {
    Tracked tr = queue.front();
    queue.pop_front();
    detail::Strand& s = tr.s;
    if (s.step > 0 && s.tau == Quad(0)) {
      cycles.push_back({std::move(tr.visited)});
      continue;
    }
    if (s.step >= cap) throw error("cycle_structure: element is not periodic within the cap");
    // record the current slice in origin coordinates
    tr.visited.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                          {s.oh_lo, s.oh_lo + s.ch.length()},
                          s.tau});
    bool overlap = false;
    const StepPiece* hit = detail::find_piece(sorted, s, overlap);
    if (hit == nullptr && overlap) {
      // splitting discards the partial visit history; re-derive by queueing
      // the halves from scratch with trimmed origins
      std::deque<detail::Strand> halves;
      detail::split_at_boundary(sorted, s, halves);
      for (auto& h : halves) {
        Tracked sub;
        sub.s = h;
        // trim the recorded history to the sub-strand's origin window
        for (const auto& piece : tr.visited) {
          const Quad b_off = h.ob_lo - s.ob_lo, h_off = h.oh_lo - s.oh_lo;
          sub.visited.push_back({{piece.base.lo + b_off, piece.base.lo + b_off + h.cb.length()},
                                 {piece.height.lo + h_off, piece.height.lo + h_off + h.ch.length()},
                                 piece.shift});
        }
        sub.visited.pop_back();  // re-added on the next visit
        queue.push_back(std::move(sub));
      }
      continue;
    }
    if (hit == nullptr) throw error("cycle_structure: orbit leaves the support");
    std::deque<detail::Strand> moved;
    detail::move_strand(fp, s, hit->shift, moved);
    for (auto& m : moved) {
      if (moved.size() == 1) {
        queue.push_back({m, tr.visited});
        continue;
      }
      // the move split the strand: slice the history accordingly
      Tracked sub;
      sub.s = m;
      const Quad b_off = m.ob_lo - s.ob_lo, h_off = m.oh_lo - s.oh_lo;
      for (const auto& piece : tr.visited)
        sub.visited.push_back({{piece.base.lo + b_off, piece.base.lo + b_off + m.cb.length()},
                               {piece.height.lo + h_off, piece.height.lo + h_off + m.ch.length()},
                               piece.shift});
      queue.push_back(std::move(sub));
    }
  }
  return cycles;
}

InvolutionPair periodic_decomposition(const FlowParams& fp, const StepElement& t, long cap) {
  PieceList u_pieces, v_pieces;
  for (const auto& cyc : cycle_structure(fp, t, cap)) {
    const long k = static_cast<long>(cyc.orbit.size());
    if (k == 1) continue;  // fixed slice: canonical form should not produce these
    // cycle (0 1 ... k-1) = alpha o beta with beta(i) = k-1-i and
    // alpha(i) = (k-i) mod k, both involutions
    for (long i = 0; i < k; ++i) {
      const auto& at = cyc.orbit[static_cast<std::size_t>(i)];
      const long bi = k - 1 - i;
      const long ai = (k - i) % k;
      const Quad beta_shift = cyc.orbit[static_cast<std::size_t>(bi)].shift - at.shift;
      const Quad alpha_shift = cyc.orbit[static_cast<std::size_t>(ai)].shift - at.shift;
      // the slice actually sits at its position along the orbit
      const RectSet pos = at.rect().flowed(fp, at.shift);
      for (const auto& [bb, hs] : pos.slabs()) {
        for (const auto& hp : hs.parts()) {
          v_pieces.push_back({bb, hp, beta_shift});
          u_pieces.push_back({bb, hp, alpha_shift});
        }
      }
    }
  }
  InvolutionPair out;
  out.u = StepElement::from_pieces(fp, std::move(u_pieces));
  out.v = StepElement::from_pieces(fp, std::move(v_pieces));
  return out;
}

ThreeCyclePair involution_to_three_cycles(const FlowParams& fp, const StepElement& u, long cap) {
  // collect 2-cycles (pairs of mirrored slices)
  struct Pair {
    StepPiece lower;  // the slice with positive shift to its partner
    Quad shift;       // lower -> upper
    bool used = false;
  };
  std::vector<Pair> pairs;
  for (const auto& cyc : cycle_structure(fp, u, cap)) {
    if (cyc.orbit.size() != 2) throw error("involution_to_three_cycles: element is not an involution");
    const auto& a = cyc.orbit[0];
    const auto& b = cyc.orbit[1];
    // orient so the stored shift sends box1 to box2
    (void)b;
    pairs.push_back({{a.base, a.height, Quad(0)}, cyc.orbit[1].shift});
  }

  PieceList first, second;
  // Greedy mirror matching: two 2-cycles pair up when one is a flow
  // translate of the other and all four boxes are disjoint.
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].used) continue;
    bool matched = false;
    for (std::size_t j = i + 1; j < pairs.size() && !matched; ++j) {
      if (pairs[j].used) continue;
      if (!(pairs[i].lower.base.length() == pairs[j].lower.base.length()) ||
          !(pairs[i].lower.height.length() == pairs[j].lower.height.length()))
        continue;
      const auto ot = orbit_time(fp, {pairs[i].lower.base.lo, pairs[i].lower.height.lo},
                                 {pairs[j].lower.base.lo, pairs[j].lower.height.lo});
      if (!ot) continue;
      // boxes: 1 = i.lower, 2 = i.upper, 3 = j.lower, 4 = j.upper
      const Quad t13 = *ot;
      const Quad u12 = pairs[i].shift, u34 = pairs[j].shift;
      // verify rectangles coincide exactly under the flow translate
      const RectSet b1 = pairs[i].lower.rect();
      if (!(b1.flowed(fp, t13) == pairs[j].lower.rect())) continue;
      pairs[i].used = pairs[j].used = true;
      matched = true;
      // (123): 1->2->3->1 and (423): 2->3->4->2, composed second-then-first
      const RectSet b2 = b1.flowed(fp, u12);
      const RectSet b3 = pairs[j].lower.rect();
      const RectSet b4 = b3.flowed(fp, u34);
      auto push = [](PieceList& dst, const RectSet& src, const Quad& shift) {
        for (const auto& [bb, hs] : src.slabs())
          for (const auto& hp : hs.parts()) dst.push_back({bb, hp, shift});
      };
      // first = (123): 1->2, 2->3, 3->1
      push(first, b1, u12);
      push(first, b2, t13 - u12);
      push(first, b3, -t13);
      // second = (234): 2->3, 3->4, 4->2
      push(second, b2, t13 - u12);
      push(second, b3, u34);
      push(second, b4, u12 - t13 - u34);
    }
    if (!matched) throw error("involution_to_three_cycles: no disjoint mirror region found");
  }
  ThreeCyclePair out;
  out.first = StepElement::from_pieces(fp, std::move(first));
  out.second = StepElement::from_pieces(fp, std::move(second));
  return out;
}

}  // namespace l1flow
