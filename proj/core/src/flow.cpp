#include "l1flow/flow.hpp"

#include <algorithm>

namespace l1flow {

namespace {
const Quad kOne(Rational(1));

Quad qmin(const Quad& x, const Quad& y) { return x < y ? x : y; }
Quad qmax(const Quad& x, const Quad& y) { return x < y ? y : x; }
}  // namespace

void FlowParams::check() const {
  if (!(Quad() < alpha && alpha < kOne)) throw error("FlowParams: alpha must be in (0,1)");
  if (alpha.b() == 0) throw error("FlowParams: alpha must be irrational");
  if (roof <= 0) throw error("FlowParams: roof must be positive");
}

FlowPoint flow_by(const FlowParams& fp, const FlowPoint& x, const Quad& t) {
  const Quad h = fp.roof_q();
  const BigInt k = ((x.s + t) / h).floor();
  const Quad kq{Rational(k)};
  return {mod_one(x.theta + kq * fp.alpha), x.s + t - kq * h};
}

std::optional<Quad> orbit_time(const FlowParams& fp, const FlowPoint& x, const FlowPoint& y) {
  // theta_y - theta_x must equal k alpha mod 1; the sqrt2 part pins k.
  const Quad d = y.theta - x.theta;
  const Rational db = d.b(), ab = fp.alpha.b();
  const Rational kq = db / ab;
  if (denominator(kq) != 1) return std::nullopt;
  const Quad k{kq};
  const Quad rem = d - k * fp.alpha;  // must be an integer (rational with den 1)
  if (rem.b() != 0 || denominator(rem.a()) != 1) return std::nullopt;
  return k * fp.roof_q() + (y.s - x.s);
}

CrossSection CrossSection::build(const FlowParams& fp, const IntervalSet& base, long cap) {
  fp.check();
  if (base.empty()) throw error("CrossSection: empty base");
  if (base.min() < Quad() || Quad(Rational(1)) < base.max())
    throw error("CrossSection: base not inside [0,1)");
  CrossSection c;
  c.fp_ = fp;
  c.base_ = base;

  auto sweep = [&](int direction, std::vector<ReturnPiece>& out) {
    IntervalSet pending = base;
    for (long k = 1; k <= cap && !pending.empty(); ++k) {
      const IntervalSet target =
          circle_translate(base, Quad(Rational(-direction * k)) * fp.alpha);
      const IntervalSet hits = pending.intersect(target);
      for (const auto& p : hits.parts()) out.push_back({p, k});
      pending = pending.subtract(hits);
      if (k == cap && !pending.empty()) throw error("CrossSection: refinement cap exceeded");
    }
    std::sort(out.begin(), out.end(),
              [](const ReturnPiece& a, const ReturnPiece& b) { return a.base.lo < b.base.lo; });
  };
  sweep(+1, c.returns_);
  sweep(-1, c.back_returns_);

  IntervalSet remaining = IntervalSet::single(Quad(), Quad(Rational(1))).subtract(base);
  for (const auto& p : base.parts()) c.columns_.push_back({p, 0});
  for (long j = 1; j <= cap && !remaining.empty(); ++j) {
    const IntervalSet layer = remaining.intersect(circle_translate(base, Quad(Rational(j)) * fp.alpha));
    for (const auto& p : layer.parts()) c.columns_.push_back({p, j});
    remaining = remaining.subtract(layer);
    if (j == cap && !remaining.empty()) throw error("CrossSection: column cap exceeded");
  }
  std::sort(c.columns_.begin(), c.columns_.end(),
            [](const ReturnPiece& a, const ReturnPiece& b) { return a.base.lo < b.base.lo; });
  return c;
}

namespace {
long lookup(const std::vector<ReturnPiece>& pieces, const Quad& theta, const char* what) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), theta,
                             [](const Quad& t, const ReturnPiece& p) { return t < p.base.lo; });
  if (it != pieces.begin()) {
    --it;
    if (it->base.contains(theta)) return it->k;
  }
  throw error(std::string("CrossSection: point outside ") + what);
}
}  // namespace

long CrossSection::return_count(const Quad& theta) const {
  return lookup(returns_, theta, "base (forward returns)");
}
long CrossSection::back_return_count(const Quad& theta) const {
  return lookup(back_returns_, theta, "base (backward returns)");
}
long CrossSection::column_index(const Quad& theta) const {
  return lookup(columns_, theta, "circle (columns)");
}

Quad CrossSection::sigma(const Quad& theta) const {
  return mod_one(theta + Quad(Rational(return_count(theta))) * fp_.alpha);
}
Quad CrossSection::sigma_inv(const Quad& theta) const {
  return mod_one(theta - Quad(Rational(back_return_count(theta))) * fp_.alpha);
}

long CrossSection::max_return() const {
  long m = 0;
  for (const auto& p : returns_) m = std::max(m, p.k);
  return m;
}
long CrossSection::min_return() const {
  long m = 0;
  for (const auto& p : returns_) m = (m == 0) ? p.k : std::min(m, p.k);
  return m;
}

Quad CrossSection::kac_sum() const {
  Quad s;
  for (const auto& p : returns_) s += Quad(Rational(p.k)) * p.base.length();
  return s;
}

std::pair<FlowPoint, Quad> project(const Tessellation& tess, const FlowPoint& x) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  const long m = c.column_index(x.theta);
  const Quad theta_c = mod_one(x.theta - Quad(Rational(m)) * fp.alpha);
  const Quad u = Quad(Rational(m)) * fp.roof_q() + x.s;
  if (tess.kind == TessKind::Canonical) return {{theta_c, Quad()}, u};
  const Quad g = c.gap(theta_c);
  const Quad forward = g - u;
  if (forward < u) {
    return {{c.sigma(theta_c), Quad()}, -forward};
  }
  return {{theta_c, Quad()}, u};  // nearer to c, or tie broken to the earlier point
}

// ---------------------------------------------------------------------------
// RectSet

RectSet RectSet::rect(const Interval& base, const Interval& height) {
  return from_slabs({{base, IntervalSet::single(height.lo, height.hi)}});
}

RectSet RectSet::full(const FlowParams& fp) {
  return rect({Quad(), kOne}, {Quad(), fp.roof_q()});
}

RectSet RectSet::from_slabs(std::vector<std::pair<Interval, IntervalSet>> slabs) {
  std::vector<Quad> cuts;
  cuts.reserve(slabs.size() * 2);
  for (const auto& [b, hs] : slabs) {
    cuts.push_back(b.lo);
    cuts.push_back(b.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::sort(slabs.begin(), slabs.end(),
            [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });

  RectSet out;
  std::vector<const std::pair<Interval, IntervalSet>*> active;
  std::size_t next = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Interval atom{cuts[i], cuts[i + 1]};
    while (next < slabs.size() && slabs[next].first.lo <= atom.lo) {
      active.push_back(&slabs[next]);
      ++next;
    }
    std::erase_if(active, [&](const auto* s) { return s->first.hi <= atom.lo; });
    std::vector<Interval> hv;
    for (const auto* s : active)
      for (const auto& hp : s->second.parts()) hv.push_back(hp);
    IntervalSet hs = IntervalSet::from_parts(std::move(hv));
    if (hs.empty()) continue;
    if (!out.slabs_.empty() && out.slabs_.back().first.hi == atom.lo &&
        out.slabs_.back().second == hs) {
      out.slabs_.back().first.hi = atom.hi;
    } else {
      out.slabs_.push_back({atom, std::move(hs)});
    }
  }
  return out;
}

Quad RectSet::area() const {
  Quad a;
  for (const auto& [b, h] : slabs_) a += b.length() * h.measure();
  return a;
}

IntervalSet RectSet::heights_at(const Quad& theta) const {
  auto it = std::upper_bound(slabs_.begin(), slabs_.end(), theta,
                             [](const Quad& t, const auto& s) { return t < s.first.lo; });
  if (it != slabs_.begin()) {
    --it;
    if (it->first.contains(theta)) return it->second;
  }
  return {};
}

RectSet RectSet::bulk_union(std::vector<RectSet> sets) {
  if (sets.empty()) return {};
  while (sets.size() > 1) {
    std::vector<RectSet> next;
    for (std::size_t i = 0; i + 1 < sets.size(); i += 2)
      next.push_back(sets[i].unite(sets[i + 1]));
    if (sets.size() % 2 == 1) next.push_back(sets.back());
    sets = std::move(next);
  }
  return sets.front();
}

namespace {

template <typename Combine>
RectSet slab_combine(const RectSet& x, const RectSet& y, Combine&& comb) {
  std::vector<Quad> cuts;
  for (const auto& [b, h] : x.slabs()) { cuts.push_back(b.lo); cuts.push_back(b.hi); }
  for (const auto& [b, h] : y.slabs()) { cuts.push_back(b.lo); cuts.push_back(b.hi); }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<Interval, IntervalSet>> slabs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Quad mid = (cuts[i] + cuts[i + 1]) / Quad(Rational(2));
    IntervalSet hs = comb(x.heights_at(mid), y.heights_at(mid));
    if (!hs.empty()) slabs.push_back({{cuts[i], cuts[i + 1]}, std::move(hs)});
  }
  return RectSet::from_slabs(std::move(slabs));
}

}  // namespace

RectSet RectSet::unite(const RectSet& o) const {
  return slab_combine(*this, o, [](const IntervalSet& a, const IntervalSet& b) { return a.unite(b); });
}
RectSet RectSet::intersect(const RectSet& o) const {
  return slab_combine(*this, o, [](const IntervalSet& a, const IntervalSet& b) { return a.intersect(b); });
}
RectSet RectSet::subtract(const RectSet& o) const {
  return slab_combine(*this, o, [](const IntervalSet& a, const IntervalSet& b) { return a.subtract(b); });
}

bool RectSet::operator==(const RectSet& o) const {
  if (slabs_.size() != o.slabs_.size()) return false;
  for (std::size_t i = 0; i < slabs_.size(); ++i) {
    if (slabs_[i].first.lo != o.slabs_[i].first.lo ||
        slabs_[i].first.hi != o.slabs_[i].first.hi || !(slabs_[i].second == o.slabs_[i].second))
      return false;
  }
  return true;
}

RectSet RectSet::flowed(const FlowParams& fp, const Quad& t) const {
  const Quad h = fp.roof_q();
  std::vector<std::pair<Interval, IntervalSet>> slabs;
  for (const auto& [b, hs] : slabs_) {
    for (const auto& hp : hs.parts()) {
      const Quad lo = hp.lo + t, hi = hp.hi + t;
      for (BigInt j = (lo / h).floor(); Quad(Rational(j)) * h < hi; ++j) {
        const Quad jq{Rational(j)};
        const Quad band_lo = qmax(lo, jq * h), band_hi = qmin(hi, (jq + kOne) * h);
        if (!(band_lo < band_hi)) continue;
        const IntervalSet moved_base = circle_translate(IntervalSet::single(b.lo, b.hi), jq * fp.alpha);
        for (const auto& mb : moved_base.parts())
          slabs.push_back({mb, IntervalSet::single(band_lo - jq * h, band_hi - jq * h)});
      }
    }
  }
  return from_slabs(std::move(slabs));
}

std::vector<Quad> RectSet::base_breakpoints() const {
  std::vector<Quad> cuts;
  for (const auto& [b, h] : slabs_) { cuts.push_back(b.lo); cuts.push_back(b.hi); }
  return cuts;
}

Quad segment_measure(const FlowParams& fp, const RectSet& a, const Quad& theta,
                     const Quad& off_lo, const Quad& off_hi) {
  const Quad h = fp.roof_q();
  Quad total;
  for (BigInt j = (off_lo / h).floor(); Quad(Rational(j)) * h < off_hi; ++j) {
    const Quad jq{Rational(j)};
    const Quad lo = qmax(off_lo, jq * h), hi = qmin(off_hi, (jq + kOne) * h);
    if (!(lo < hi)) continue;
    const Quad th = mod_one(theta + jq * fp.alpha);
    total += a.heights_at(th).intersect(IntervalSet::single(lo - jq * h, hi - jq * h)).measure();
  }
  return total;
}

Quad fiber_measure(const Tessellation& tess, const RectSet& a, const Quad& theta) {
  const CrossSection& c = tess.section;
  if (tess.kind == TessKind::Canonical)
    return segment_measure(c.params(), a, theta, Quad(), c.gap(theta));
  const Quad two(Rational(2));
  return segment_measure(c.params(), a, theta, -(c.gap_prev(theta) / two), c.gap(theta) / two);
}

std::vector<Interval> refine_intervals(const std::vector<Interval>& atoms,
                                       const std::vector<Quad>& cuts) {
  std::vector<Quad> sorted = cuts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Interval> out;
  for (const auto& a : atoms) {
    Quad cur = a.lo;
    for (const auto& c : sorted) {
      if (a.lo < c && c < a.hi) {
        out.push_back({cur, c});
        cur = c;
      }
    }
    out.push_back({cur, a.hi});
  }
  return out;
}

std::vector<std::pair<Interval, Quad>> fiber_profile(const Tessellation& tess, const RectSet& a) {
  const CrossSection& c = tess.section;
  const FlowParams& fp = c.params();
  std::vector<std::pair<Interval, Quad>> out;
  for (const auto& rp : c.returns()) {
    // Within one forward-return piece, refine until the fiber measure is
    // constant: cuts from the backward partition and from the set's base
    // boundaries pulled back through every wrap the cell can touch.
    std::vector<Quad> cuts;
    const long span = rp.k + (tess.kind == TessKind::Voronoi ? c.max_return() : 0);
    for (const auto& bp : c.back_returns()) { cuts.push_back(bp.base.lo); cuts.push_back(bp.base.hi); }
    const auto bpts = a.base_breakpoints();
    for (long j = -span; j <= span; ++j) {
      for (const auto& q : bpts) {
        const Quad pulled = mod_one(q - Quad(Rational(j)) * fp.alpha);
        cuts.push_back(pulled);
      }
    }
    for (const auto& atom : refine_intervals({rp.base}, cuts)) {
      const Quad mid = (atom.lo + atom.hi) / Quad(Rational(2));
      out.push_back({atom, fiber_measure(tess, a, mid)});
    }
  }
  return out;
}

CrossSection sparse_section(const FlowParams& fp, long min_return, long cap) {
  Quad delta = kOne;
  for (int tries = 0; tries < 300; ++tries) {
    CrossSection c = CrossSection::build(fp, IntervalSet::single(Quad(), delta), cap);
    if (c.min_return() >= min_return) return c;
    delta = delta / Quad(Rational(2));
  }
  throw error("sparse_section: could not reach the requested gap");
}

// ---------------------------------------------------------------------------
// Lacunary partition: tower coloring with block lengths N and N+1.

namespace {

struct Strand {
  Interval cur;
  std::vector<Interval> history;  // history[p] = sigma^p-preimage slice, p = 0 .. size-1
};

// Splits the strand at the given point of `cur` (strictly inside).
std::pair<Strand, Strand> split_strand(const Strand& s, const Quad& at) {
  Strand lo = s, hi = s;
  lo.cur.hi = at;
  hi.cur.lo = at;
  const Quad off = at - s.cur.lo;
  for (std::size_t p = 0; p < s.history.size(); ++p) {
    lo.history[p].hi = s.history[p].lo + off;
    hi.history[p].lo = s.history[p].lo + off;
  }
  return {lo, hi};
}

}  // namespace

std::vector<CrossSection> lacunary_partition(const CrossSection& c, const Quad& v) {
  const FlowParams& fp = c.params();
  const Quad min_gap = Quad(fp.roof) * Quad(Rational(c.min_return()));
  if (v < min_gap) return {c};

  const long n = static_cast<long>((v / min_gap).floor()) + 1;  // spacing in sigma-steps
  const long need = n * n;

  // Marker interval with sigma_C-return times >= n^2.
  Interval marker = c.base().parts().front();
  std::vector<Strand> done;
  for (int tries = 0;; ++tries) {
    if (tries > 200) throw error("lacunary_partition: marker search failed");
    done.clear();
    std::vector<Strand> live;
    live.push_back({marker, {marker}});
    bool ok = true;
    long guard = 0;
    while (!live.empty() && ok) {
      if (++guard > 100000) throw error("lacunary_partition: tower cap exceeded");
      std::vector<Strand> next;
      for (auto& s : live) {
        // Apply sigma_C piecewise over the return partition.
        std::vector<Strand> parts;
        std::vector<Strand> queue{{s}};
        for (const auto& rp : c.returns()) {
          std::vector<Strand> rest;
          for (auto& q : queue) {
            const Quad lo = qmax(q.cur.lo, rp.base.lo), hi = qmin(q.cur.hi, rp.base.hi);
            if (!(lo < hi)) { rest.push_back(q); continue; }
            Strand mid = q;
            if (q.cur.lo < lo) { auto [l, r] = split_strand(q, lo); rest.push_back(l); mid = r; }
            if (hi < mid.cur.hi) { auto [l, r] = split_strand(mid, hi); rest.push_back(r); mid = l; }
            // Translate by k alpha mod 1, splitting at the wrap.
            const Quad t = mod_one(Quad(Rational(rp.k)) * fp.alpha);
            Quad wrap_pre = kOne - t;
            if (mid.cur.lo < wrap_pre && wrap_pre < mid.cur.hi) {
              auto [l, r] = split_strand(mid, wrap_pre);
              l.cur = {l.cur.lo + t, l.cur.hi + t};
              r.cur = {r.cur.lo + t - kOne, r.cur.hi + t - kOne};
              parts.push_back(l);
              parts.push_back(r);
            } else {
              const Quad shift = (mid.cur.lo + t < kOne) ? t : t - kOne;
              mid.cur = {mid.cur.lo + shift, mid.cur.hi + shift};
              parts.push_back(mid);
            }
          }
          queue = std::move(rest);
        }
        if (!queue.empty()) throw error("lacunary_partition: point escaped the return partition");
        for (auto& p : parts) {
          // Landed back in the marker?
          const Quad lo = qmax(p.cur.lo, marker.lo), hi = qmin(p.cur.hi, marker.hi);
          std::vector<Strand> sub{{p}};
          if (lo < hi) {
            sub.clear();
            Strand midp = p;
            if (p.cur.lo < lo) { auto [l, r] = split_strand(p, lo); sub.push_back(l); midp = r; }
            if (hi < midp.cur.hi) { auto [l, r] = split_strand(midp, hi); sub.push_back(r); midp = l; }
            if (static_cast<long>(midp.history.size()) < need) { ok = false; break; }
            done.push_back(midp);  // returned: history holds levels 0..R-1
          }
          for (auto& q : sub) {
            q.history.push_back(q.cur);
            next.push_back(q);
          }
        }
        if (!ok) break;
      }
      live = std::move(next);
    }
    if (ok) break;
    marker.hi = marker.lo + (marker.hi - marker.lo) / Quad(Rational(2));
  }

  std::vector<std::vector<Interval>> classes(static_cast<std::size_t>(n) + 1);
  for (const auto& branch : done) {
    const long r = static_cast<long>(branch.history.size());
    const long b = r % n;
    const long a = (r - b * (n + 1)) / n;
    for (long p = 0; p < r; ++p) {
      long pos;
      if (p < a * n) pos = p % n;
      else pos = (p - a * n) % (n + 1);
      classes[static_cast<std::size_t>(pos)].push_back(branch.history[static_cast<std::size_t>(p)]);
    }
  }
  std::vector<CrossSection> out;
  for (auto& cls : classes) {
    if (cls.empty()) continue;
    out.push_back(CrossSection::build(fp, IntervalSet::from_parts(std::move(cls))));
  }
  return out;
}

Quad voronoi_cell_measure_sum(const CrossSection& c) {
  std::vector<Quad> cuts;
  for (const auto& p : c.back_returns()) { cuts.push_back(p.base.lo); cuts.push_back(p.base.hi); }
  Quad total;
  const Quad two(Rational(2));
  for (const auto& rp : c.returns()) {
    for (const auto& atom : refine_intervals({rp.base}, cuts)) {
      const Quad mid = (atom.lo + atom.hi) / two;
      const Quad cell_len = (c.gap_prev(mid) + c.gap(mid)) / two;
      total += atom.length() * cell_len;
    }
  }
  return total / c.params().roof_q();
}

}  // namespace l1flow
