#include "l1flow/arrival.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "strand.hpp"

namespace l1flow {

namespace {

struct CellAtomizer {
  const CrossSection& c;
  std::vector<Quad> col_cuts;

  explicit CellAtomizer(const CrossSection& section) : c(section) {
    for (const auto& p : c.column_partition()) {
      col_cuts.push_back(p.base.lo);
      col_cuts.push_back(p.base.hi);
    }
  }

  // Splits a base interval so the column index is constant on each part.
  std::vector<Interval> columns(const Interval& base) const {
    return refine_intervals({base}, col_cuts);
  }
};

}  // namespace

MonotoneCertificate certify_monotone(const FlowParams& fp, const StepElement& t) {
  MonotoneCertificate cert;
  for (const auto& p : t.pieces()) {
    if (p.shift.sign() > 0) cert.positive = cert.positive.unite(p.rect());
    else if (p.shift.sign() < 0) cert.negative = cert.negative.unite(p.rect());
    else cert.violations.push_back("zero-shift piece inside the support");
  }
  RectSet pos_img, neg_img;
  for (const auto& p : t.pieces()) {
    const RectSet img = p.rect().flowed(fp, p.shift);
    if (p.shift.sign() > 0) pos_img = pos_img.unite(img);
    else neg_img = neg_img.unite(img);
  }
  if (!pos_img.intersect(cert.negative).empty())
    cert.violations.push_back("a forward-moving point acquires a negative shift");
  if (!neg_img.intersect(cert.positive).empty())
    cert.violations.push_back("a backward-moving point acquires a positive shift");
  cert.monotone = cert.violations.empty() && !t.is_identity();
  if (t.is_identity()) cert.monotone = true;  // vacuously
  return cert;
}

RectSet departure_set(const Tessellation& tess, const StepElement& t) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  const CellAtomizer at(c);
  const Quad h = fp.roof_q();
  RectSet dep;
  for (const auto& piece : t.pieces()) {
    for (const auto& sub : at.columns(piece.base)) {
      const long m = c.column_index((sub.lo + sub.hi) / Quad(2));
      const Quad lo = piece.height.lo + piece.shift, hi = piece.height.hi + piece.shift;
      for (BigInt j = (lo / h).floor(); Quad(Rational(j)) * h < hi; ++j) {
        const Quad jq{Rational(j)};
        const Quad band_lo = lo < jq * h ? jq * h : lo;
        const Quad band_hi = hi < (jq + 1) * h ? hi : (jq + 1) * h;
        if (!(band_lo < band_hi)) continue;
        const Interval rows{band_lo - piece.shift, band_hi - piece.shift};
        const IntervalSet cur = circle_translate(IntervalSet::single(sub.lo, sub.hi), jq * fp.alpha);
        for (const auto& cb : cur.parts()) {
          for (const auto& tsub : at.columns(cb)) {
            const long mp = c.column_index((tsub.lo + tsub.hi) / Quad(2));
            if (BigInt(mp - m) == j) continue;  // stays in its cell
            const IntervalSet back =
                circle_translate(IntervalSet::single(tsub.lo, tsub.hi), -(jq * fp.alpha));
            for (const auto& ob : back.parts()) dep = dep.unite(RectSet::rect(ob, rows));
          }
        }
      }
    }
  }
  return dep;
}

namespace {

// Departure points whose image lands in the adjacent tessellation class.
RectSet adjacent_departures(const Tessellation& tess, const StepElement& t,
                            const MonotoneCertificate& cert) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  const CellAtomizer at(c);
  const Quad h = fp.roof_q();
  std::vector<Quad> ret_cuts;
  for (const auto& rp : c.returns()) { ret_cuts.push_back(rp.base.lo); ret_cuts.push_back(rp.base.hi); }
  for (const auto& rp : c.back_returns()) { ret_cuts.push_back(rp.base.lo); ret_cuts.push_back(rp.base.hi); }

  RectSet adj;
  for (const auto& piece : t.pieces()) {
    const bool forward = piece.shift.sign() > 0;
    for (const auto& sub0 : at.columns(piece.base)) {
      const long m = c.column_index((sub0.lo + sub0.hi) / Quad(2));
      // refine further so that sigma/sigma^{-1} of the cell point is affine
      std::vector<Quad> cuts;
      for (const auto& q : ret_cuts) cuts.push_back(mod_one(q + Quad(Rational(m)) * fp.alpha));
      for (const auto& sub : refine_intervals({sub0}, cuts)) {
        const Quad mid = (sub.lo + sub.hi) / Quad(2);
        const Quad cell_pt = mod_one(mid - Quad(Rational(m)) * fp.alpha);
        // Landing in the adjacent class means the wrap count equals the
        // column drop plus the return count of the cell point (minus the
        // backward count on the negative side); a pure integer test.
        const long k_adj =
            forward ? c.return_count(cell_pt) : -c.back_return_count(cell_pt);
        const Quad lo = piece.height.lo + piece.shift, hi = piece.height.hi + piece.shift;
        for (BigInt j = (lo / h).floor(); Quad(Rational(j)) * h < hi; ++j) {
          const Quad jq{Rational(j)};
          const Quad band_lo = lo < jq * h ? jq * h : lo;
          const Quad band_hi = hi < (jq + 1) * h ? hi : (jq + 1) * h;
          if (!(band_lo < band_hi)) continue;
          const Interval rows{band_lo - piece.shift, band_hi - piece.shift};
          const IntervalSet cur = circle_translate(IntervalSet::single(sub.lo, sub.hi), jq * fp.alpha);
          for (const auto& cb : cur.parts()) {
            for (const auto& tsub : at.columns(cb)) {
              const long mp = c.column_index((tsub.lo + tsub.hi) / Quad(2));
              if (BigInt(mp - m) == j) continue;  // not a departure at all
              if (BigInt(mp - m + k_adj) != j) continue;
              const IntervalSet back =
                  circle_translate(IntervalSet::single(tsub.lo, tsub.hi), -(jq * fp.alpha));
              for (const auto& ob : back.parts()) adj = adj.unite(RectSet::rect(ob, rows));
            }
          }
        }
      }
    }
  }
  (void)cert;
  return adj;
}

}  // namespace

PieceList ArrivalDeparture::transfer() const {
  PieceList all;
  for (const auto& lvl : levels) all.insert(all.end(), lvl.to_departure.begin(), lvl.to_departure.end());
  return canonical_pieces(std::move(all), false);
}

ArrivalDeparture arrival_departure(const Tessellation& tess, const StepElement& t, long cap,
                                   bool accept_partial) {
  const FlowParams& fp = tess.section.params();
  ArrivalDeparture ad;
  ad.cert = certify_monotone(fp, t);
  if (!ad.cert.monotone && !accept_partial)
    throw error("arrival_departure: element is not certified monotone");

  ad.departure = departure_set(tess, t);
  ad.arrival = partial_image(fp, t.pieces(), ad.departure);
  ad.departure_pos = ad.departure.intersect(ad.cert.positive);
  ad.departure_neg = ad.departure.intersect(ad.cert.negative);
  ad.arrival_pos = ad.arrival.intersect(ad.cert.positive);
  ad.arrival_neg = ad.arrival.intersect(ad.cert.negative);
  ad.departure_adjacent = adjacent_departures(tess, t, ad.cert);
  ad.arrival_adjacent = partial_image(fp, t.pieces(), ad.departure_adjacent);

  // Transfer levels: first entry of the forward orbit into the departure
  // set, walked strand by strand.
  PieceList dep_marks;  // zero-shift markers for containment tests
  for (const auto& [b, hs] : ad.departure.slabs())
    for (const auto& hp : hs.parts()) dep_marks.push_back({b, hp, Quad(0)});
  PieceList sorted = t.pieces();
  std::sort(sorted.begin(), sorted.end(),
            [](const StepPiece& a, const StepPiece& b) { return a.base.lo < b.base.lo; });

  std::map<long, PieceList> levels;
  std::vector<std::pair<Interval, IntervalSet>> residual;
  std::deque<detail::Strand> queue;
  for (const auto& [b, hs] : ad.arrival.slabs())
    for (const auto& hp : hs.parts()) queue.push_back({b, hp, b.lo, hp.lo, Quad(0), 0});
  while (!queue.empty()) {
    detail::Strand s = queue.front();
    queue.pop_front();
    if (s.step > cap) {
      residual.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                          IntervalSet::single(s.oh_lo, s.oh_lo + s.ch.length())});
      continue;
    }
    bool in_dep = false;
    const StepPiece* mark = detail::find_piece(dep_marks, s, in_dep);
    if (mark != nullptr) {
      levels[s.step].push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                                {s.oh_lo, s.oh_lo + s.ch.length()},
                                s.tau});
      continue;
    }
    if (in_dep) {  // partially inside: split against the departure set
      detail::split_at_boundary(dep_marks, s, queue);
      continue;
    }
    bool overlap = false;
    const StepPiece* hit = detail::find_piece(sorted, s, overlap);
    if (hit != nullptr) {
      detail::move_strand(fp, s, hit->shift, queue);
    } else if (!overlap) {
      // left the support without departing; counts as unresolved
      residual.push_back({{s.ob_lo, s.ob_lo + s.cb.length()},
                          IntervalSet::single(s.oh_lo, s.oh_lo + s.ch.length())});
    } else {
      detail::split_at_boundary(sorted, s, queue);
    }
  }
  for (auto& [n, pieces] : levels)
    ad.levels.push_back({n, canonical_pieces(std::move(pieces), false)});
  ad.transfer_residual = RectSet::from_slabs(std::move(residual));
  return ad;
}

std::vector<std::pair<Interval, Quad>> jump_profile(const Tessellation& tess,
                                                    const StepElement& t, bool positive) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  const Quad h = fp.roof_q();
  long span = 1;
  for (const auto& p : t.pieces()) {
    const long s = static_cast<long>((p.shift.abs() / h).floor()) + 2;
    span = std::max(span, s);
  }
  std::vector<Quad> cuts;
  for (const auto& p : t.pieces()) {
    for (long j = -span; j <= span; ++j) {
      cuts.push_back(mod_one(p.base.lo - Quad(Rational(j)) * fp.alpha));
      cuts.push_back(mod_one(p.base.hi - Quad(Rational(j)) * fp.alpha));
    }
  }
  std::vector<std::pair<Interval, Quad>> out;
  for (const auto& rp : c.returns()) {
    for (const auto& atom : refine_intervals({rp.base}, cuts)) {
      const Quad mid = (atom.lo + atom.hi) / Quad(2);
      Quad z;
      for (const auto& p : t.pieces()) {
        if (positive && p.shift.sign() > 0)
          z += segment_measure(fp, p.rect(), mid, -p.shift, Quad(0));
        if (!positive && p.shift.sign() < 0)
          z += segment_measure(fp, p.rect(), mid, Quad(0), -p.shift);
      }
      out.push_back({atom, z});
    }
  }
  return out;
}

}  // namespace l1flow
