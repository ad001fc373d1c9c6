#include "l1flow/stacking.hpp"

#include <algorithm>

namespace l1flow {

namespace {

Quad pow2_neg(long n) { return Quad(Rational(1, 1L << n)); }

RectSet over(const IntervalSet& base, const Quad& lo, const Quad& hi) {
  RectSet out;
  for (const auto& p : base.parts()) out = out.unite(RectSet::rect(p, {lo, hi}));
  return out;
}

PieceList rect_pieces(const RectSet& rs, const Quad& shift) {
  PieceList out;
  for (const auto& [b, hs] : rs.slabs())
    for (const auto& hp : hs.parts()) out.push_back({b, hp, shift});
  return out;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw error("build_stacking: " + what);
}

// Audits the two translation conditions at one level: the composed column
// maps move the bases by the exact inter-marker travel times.
void audit_translation_conditions(const StackingLevel& lv, const PieceList& vec_phi_pieces,
                                  const PieceList& vec_psi_pieces) {
  const FlowParams& fp = lv.section.params();
  const Quad h = fp.roof_q();
  const Quad pow = pow2_neg(lv.n);
  const Quad half(Rational(1, 2));

  for (const auto& p : vec_phi_pieces) {
    // basis atoms sit over B_n; expected travel: up to the first marker of
    // D_n past the next level-section hit, then down to the ceiling slot
    const long r = lv.section.return_count((p.base.lo + p.base.hi) / Quad(2));
    const Quad dist = Quad(Rational(r - 1)) * h + Quad(2);
    require(p.shift == dist - half - pow, "phi translation condition violated");
  }
  for (const auto& p : vec_psi_pieces) {
    // basis atoms sit over D_n; the matching section point is m backward
    // rotation hits away, m = column index of the level section
    const long m = lv.section.column_index((p.base.lo + p.base.hi) / Quad(2));
    const Quad dist = Quad(Rational(m)) * h + Quad(2);
    require(p.shift == Quad(1) - dist, "psi translation condition violated");
  }
}

void audit_level(const StackingLevel& lv, const RectSet& y, const PieceList& vec_phi_pieces,
                 const PieceList& vec_psi_pieces) {
  const FlowParams& fp = lv.section.params();
  const auto phi_rep = castle_validate(fp, lv.phi);
  require(phi_rep.valid, "phi is not a castle at level " + std::to_string(lv.n));
  const auto psi_rep = castle_validate(fp, lv.psi);
  require(psi_rep.valid, "psi is not a castle at level " + std::to_string(lv.n));
  require(lv.phi.basis(fp) == lv.a_basis, "phi basis formula");
  require(lv.phi.ceiling(fp) == lv.b_ceiling, "phi ceiling formula");
  require(lv.psi.basis(fp) == lv.c_basis, "psi basis formula");
  require(lv.psi.ceiling(fp) == lv.d_ceiling, "psi ceiling formula");
  const RectSet sp = lv.phi.support(fp), ss = lv.psi.support(fp);
  require(sp.intersect(ss).empty(), "phi and psi supports overlap");
  require(sp.unite(ss) == y, "phi and psi supports do not tile the region");
  Quad bound;
  for (const auto& p : lv.phi.pieces) bound = std::max(bound, p.shift.abs());
  for (const auto& p : lv.psi.pieces) bound = std::max(bound, p.shift.abs());
  require(bound <= Quad(3), "cocycle bound 3 violated");
  audit_translation_conditions(lv, vec_phi_pieces, vec_psi_pieces);
}

}  // namespace

StackingState build_stacking(const StackingOptions& opt) {
  opt.fp.check();
  const Quad h = opt.fp.roof_q();
  require(Quad(2) < h && h < Quad(3), "roof must lie in (2,3)");
  require(opt.levels >= 1 && opt.levels <= opt.max_levels, "level count out of range");

  const FlowParams& fp = opt.fp;
  const Quad half(Rational(1, 2));
  const Quad dist_marker = h - Quad(2);  // travel from a marker to the next section hit

  std::vector<Quad> ell;  // section base lengths, 1-based from level 1
  ell.push_back(Quad(1));
  for (long n = 2; n <= opt.levels; ++n) {
    const Quad v = (static_cast<std::size_t>(n - 2) < opt.vanishing.size())
                       ? opt.vanishing[static_cast<std::size_t>(n - 2)]
                       : pow2_neg(n + 1);
    require(Quad(0) < v && v < ell.back(), "vanishing bases must decrease strictly");
    ell.push_back(v);
  }

  StackingState st;
  st.fp = fp;
  st.y = over(IntervalSet::single(Quad(0), Quad(1)), Quad(0), Quad(2));

  // Level 1.
  {
    StackingLevel lv;
    lv.n = 1;
    lv.section = CrossSection::build(fp, IntervalSet::single(Quad(0), Quad(1)));
    lv.d_base = circle_translate(lv.section.base(), -fp.alpha);
    const Quad pow = pow2_neg(1);
    lv.a_basis = over(lv.section.base(), Quad(0), pow);
    lv.b_ceiling = over(lv.d_base, Quad(2) - half - pow, Quad(2) - half);
    lv.c_basis = over(lv.d_base, Quad(2) - half, Quad(2) - half + pow);
    lv.d_ceiling = over(lv.section.base(), half, half + pow);
    lv.phi.pieces = rect_pieces(lv.a_basis, Quad(1));
    lv.psi.pieces = rect_pieces(lv.c_basis, Quad(-1));
    audit_level(lv, st.y, vec_map(fp, lv.phi), vec_map(fp, lv.psi));
    st.levels.push_back(std::move(lv));
  }

  for (long n = 1; n < opt.levels; ++n) {
    const StackingLevel& cur = st.levels.back();
    const Quad pow = pow2_neg(n), pw2 = pow2_neg(n + 1);

    // Halves of the two bases and their images under the column maps.
    const RectSet a1 = over(cur.section.base(), Quad(0), pw2);
    const RectSet a0 = over(cur.section.base(), pw2, pow);
    const RectSet c0 = over(cur.d_base, Quad(2) - half + pw2, Quad(2) - half + pow);
    const RectSet b0_expected = over(cur.d_base, Quad(2) - half - pow, Quad(2) - half - pw2);
    const RectSet d0_expected = over(cur.section.base(), half + pw2, half + pow);
    const RectSet b0 = partial_image(fp, vec_map(fp, cur.phi), a1);
    require(b0 == b0_expected, "vec phi image of the lower basis half");
    const RectSet d0 = partial_image(fp, vec_map(fp, cur.psi), c0);
    require(d0 == d0_expected, "vec psi image of the upper basis half");
    // (the level audit below recomputes the vec maps of the next level)

    const RectSet e = castle_saturation(fp, cur.psi, c0);
    Castle phi_t;  // interleaved castle
    phi_t.pieces = cur.phi.pieces;
    for (auto p : rect_pieces(b0, Quad(3) * pw2)) phi_t.pieces.push_back(p);
    for (auto p : rect_pieces(d0, -half)) phi_t.pieces.push_back(p);
    for (auto p : partial_restrict(fp, cur.psi.pieces, e)) phi_t.pieces.push_back(p);
    phi_t.pieces = canonical_pieces(std::move(phi_t.pieces), false);

    Castle psi_t;
    psi_t.pieces = partial_restrict(fp, cur.psi.pieces, cur.psi.support(fp).subtract(e));

    // Pass through the abandoned markers of the finer level.
    StackingLevel nxt;
    nxt.n = n + 1;
    nxt.section = CrossSection::build(fp, IntervalSet::single(Quad(0), ell[static_cast<std::size_t>(n)]));
    nxt.d_base = circle_translate(nxt.section.base(), -fp.alpha);

    const IntervalSet dropped_d = cur.d_base.subtract(nxt.d_base);
    const IntervalSet dropped_b = cur.section.base().subtract(nxt.section.base());
    const RectSet xi_fwd_dom = over(dropped_d, Quad(2) - half - pw2, Quad(2) - half);
    const RectSet xi_bwd_dom = over(dropped_b, half, half + pw2);

    nxt.phi.pieces = phi_t.pieces;
    for (auto p : rect_pieces(xi_fwd_dom, dist_marker + half + pw2)) nxt.phi.pieces.push_back(p);
    nxt.phi.pieces = canonical_pieces(std::move(nxt.phi.pieces), false);

    nxt.psi.pieces = psi_t.pieces;
    for (auto p : rect_pieces(xi_bwd_dom, -(dist_marker + Quad(1)))) nxt.psi.pieces.push_back(p);
    nxt.psi.pieces = canonical_pieces(std::move(nxt.psi.pieces), false);

    nxt.a_basis = over(nxt.section.base(), Quad(0), pw2);
    nxt.b_ceiling = over(nxt.d_base, Quad(2) - half - pw2, Quad(2) - half);
    nxt.c_basis = over(nxt.d_base, Quad(2) - half, Quad(2) - half + pw2);
    nxt.d_ceiling = over(nxt.section.base(), half, half + pw2);

    audit_level(nxt, st.y, vec_map(fp, nxt.phi), vec_map(fp, nxt.psi));
    // support halving and extension
    require(nxt.psi.support(fp).measure(fp) * Quad(2) == cur.psi.support(fp).measure(fp),
            "psi support halving");
    require(canonical_pieces(partial_restrict(fp, nxt.phi.pieces, cur.phi.dom()), false) ==
                canonical_pieces(cur.phi.pieces, false),
            "phi extension");
    st.levels.push_back(std::move(nxt));
  }

  // Close phi_N and psi_N into a bijection of the working region via the
  // two short gluing translations, then rewire over the leftover strip.
  const StackingLevel& top = st.levels.back();
  const Quad pow = pow2_neg(opt.levels);
  PieceList closed = top.phi.pieces;
  for (auto p : top.psi.pieces) closed.push_back(p);
  for (auto p : rect_pieces(top.b_ceiling, pow)) closed.push_back(p);
  for (auto p : rect_pieces(top.d_ceiling, -half)) closed.push_back(p);
  st.closed = StepElement::from_pieces(fp, std::move(closed));
  require(st.closed.support() == st.y, "closed element must be supported on the region");
  st.substitution_measure = top.psi.support(fp).measure(fp);

  st.z = over(IntervalSet::single(Quad(0), Quad(1)), Quad(2), h);
  st.z_prime = over(IntervalSet::single(Quad(0), Quad(1)), Quad(4) - h, Quad(2));
  const Quad eta = h - Quad(2);
  PieceList s_pieces;
  for (const auto& p : st.closed.pieces()) {
    const RectSet outside = p.rect().subtract(st.z_prime);
    for (auto q : rect_pieces(outside, p.shift)) s_pieces.push_back(q);
    const RectSet inside = p.rect().intersect(st.z_prime);
    if (!inside.empty())
      for (auto q : rect_pieces(inside.flowed(fp, eta), p.shift - eta)) s_pieces.push_back(q);
  }
  // identity parts of z' still jump to z
  const RectSet idle = st.z_prime.subtract(st.closed.domain_cells());
  for (auto q : rect_pieces(idle, eta)) s_pieces.push_back(q);
  const RectSet covered = st.closed.domain_cells().intersect(st.z_prime);
  for (auto q : rect_pieces(covered, eta)) s_pieces.push_back(q);
  st.s = StepElement::from_pieces(fp, std::move(s_pieces));

  Quad s_bound;
  for (const auto& p : st.s.pieces()) s_bound = std::max(s_bound, p.shift.abs());
  require(s_bound <= Quad(4), "cocycle bound 4 violated for the rewired element");
  return st;
}

std::vector<RankOneRow> rank_one_diagnostic(const StackingState& st, long n) {
  require(n >= 1 && n <= static_cast<long>(st.levels.size()), "level not built");
  const StackingLevel& lv = st.levels[static_cast<std::size_t>(n - 1)];
  const FlowParams& fp = st.fp;
  const Quad h = fp.roof_q();
  const Quad pow = pow2_neg(n);

  std::vector<RankOneRow> rows;
  for (const auto& rp : lv.section.returns()) {
    // refine so that every piece boundary of phi is visible along the column
    std::vector<Quad> cuts;
    const long span = rp.k + 1;
    for (const auto& piece : lv.phi.pieces) {
      for (long j = -span; j <= span; ++j) {
        cuts.push_back(mod_one(piece.base.lo - Quad(Rational(j)) * fp.alpha));
        cuts.push_back(mod_one(piece.base.hi - Quad(Rational(j)) * fp.alpha));
      }
    }
    for (const auto& atom : refine_intervals({rp.base}, cuts)) {
      const Quad theta = (atom.lo + atom.hi) / Quad(2);
      const Quad len = Quad(Rational(rp.k - 1)) * h + Quad(2);
      const Quad y_len = Quad(Rational(2 * rp.k));  // the in-region mass of the interval
      // walk the column of the basis strip [0, 2^-n) at theta
      Quad tau;
      Quad covered = pow;
      std::vector<std::pair<Quad, Quad>> segs{{Quad(0), pow}};
      for (long guard = 0; guard < 100000; ++guard) {
        const FlowPoint bottom = flow_by(fp, {theta, Quad(0)}, tau);
        const StepPiece* hit = nullptr;
        for (const auto& piece : lv.phi.pieces) {
          if (piece.base.contains(bottom.theta) && piece.height.contains(bottom.s)) {
            hit = &piece;
            break;
          }
        }
        if (!hit) break;  // reached the ceiling
        require(!(hit->height.hi < bottom.s + pow), "rank one: strip split by a piece boundary");
        tau += hit->shift;
        require(!(tau < Quad(0)) && !(len < tau + pow), "rank one: column leaves its interval");
        segs.push_back({tau, tau + pow});
        covered += pow;
      }
      // disjointness audit of the collected offset intervals
      std::sort(segs.begin(), segs.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      for (std::size_t i = 1; i < segs.size(); ++i)
        require(!(segs[i].first < segs[i - 1].second), "rank one: iterates overlap");
      rows.push_back({atom, len, y_len, covered});
    }
  }
  return rows;
}

AlternationStats sign_alternation_stats(const FlowParams& fp, const StepElement& t, long samples,
                                        long horizon) {
  AlternationStats stats;
  stats.samples = samples;
  const Quad h = fp.roof_q();
  for (long i = 0; i < samples; ++i) {
    const FlowPoint x{Quad(Rational(2 * i + 1, 2 * samples)),
                      Quad(Rational((7 * i) % 23, 23)) * h};
    FlowPoint y = x;
    Quad rho;
    int last_step = 0, last_cum = 0;
    long alt = 0;
    bool cum_alt = false;
    for (long k = 0; k < horizon; ++k) {
      const Quad step = t.cocycle(y);
      rho += step;
      y = t.apply(fp, y);
      const int ss = step.sign();
      if (ss != 0) {
        if (last_step != 0 && ss != last_step) ++alt;
        last_step = ss;
      }
      const int cs = rho.sign();
      if (cs != 0) {
        if (last_cum != 0 && cs != last_cum) cum_alt = true;
        last_cum = cs;
      }
    }
    stats.per_sample.push_back(alt);
    if (alt > 0) ++stats.alternated;
    if (cum_alt) ++stats.cumulative_alternated;
    stats.max_alternations = std::max(stats.max_alternations, alt);
  }
  return stats;
}

}  // namespace l1flow
