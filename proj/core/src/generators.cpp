#include "l1flow/generators.hpp"

#include <random>

namespace l1flow::gen {

namespace {

long draw(std::mt19937_64& rng, long lo, long hi) {  // inclusive bounds
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct BoxGrid {
  std::vector<Interval> atoms;  // theta atoms
  Quad block;                   // height block size
  long blocks;

  static BoxGrid make(const FlowParams& fp, std::mt19937_64& rng) {
    BoxGrid g;
    const long k = draw(rng, 2, 4);
    std::vector<Quad> cuts{Quad(0), Quad(1)};
    for (long j = 1; j <= k; ++j) cuts.push_back(mod_one(Quad(Rational(j)) * fp.alpha));
    g.atoms = refine_intervals({{Quad(0), Quad(1)}}, cuts);
    g.blocks = draw(rng, 2, 5);
    g.block = fp.roof_q() / Quad(Rational(g.blocks));
    return g;
  }

  Interval pick_atom(std::mt19937_64& rng) const {
    return atoms[static_cast<std::size_t>(draw(rng, 0, static_cast<long>(atoms.size()) - 1))];
  }
};

StepElement vertical_rotation(const FlowParams& fp, const BoxGrid& g, std::mt19937_64& rng) {
  const Interval atom = g.pick_atom(rng);
  const Quad t = g.block * Quad(Rational(draw(rng, 1, g.blocks - 1)));
  const Quad h = fp.roof_q();
  return StepElement::from_pieces(fp,
                                  {{atom, {Quad(0), h - t}, t}, {atom, {h - t, h}, t - h}});
}

StepElement vertical_swap(const FlowParams& fp, const BoxGrid& g, std::mt19937_64& rng) {
  const Interval atom = g.pick_atom(rng);
  long i = draw(rng, 0, g.blocks - 1), j = draw(rng, 0, g.blocks - 1);
  if (i == j) return StepElement::identity();
  const Quad u = g.block * Quad(Rational(i)), v = g.block * Quad(Rational(j));
  return StepElement::from_pieces(
      fp, {{atom, {u, u + g.block}, v - u}, {atom, {v, v + g.block}, u - v}});
}

StepElement wrap_swap(const FlowParams& fp, const BoxGrid& g, std::mt19937_64& rng) {
  // Swap a box with its flow image one wrap ahead, landing in another block.
  const Interval atom = g.pick_atom(rng);
  long bi = draw(rng, 0, g.blocks - 1), bj = draw(rng, 0, g.blocks - 1);
  if (bi == bj) bj = (bj + 1) % g.blocks;
  const Quad u = g.block * Quad(Rational(bi)), v = g.block * Quad(Rational(bj));
  const Quad shift = fp.roof_q() + (v - u);
  const RectSet src = RectSet::rect(atom, {u, u + g.block});
  const RectSet dst = src.flowed(fp, shift);
  PieceList pieces;
  for (const auto& [b, hs] : src.slabs())
    for (const auto& hp : hs.parts()) pieces.push_back({b, hp, shift});
  for (const auto& [b, hs] : dst.slabs())
    for (const auto& hp : hs.parts()) pieces.push_back({b, hp, -shift});
  return StepElement::from_pieces(fp, std::move(pieces));
}

}  // namespace

StepElement grid_element(const FlowParams& fp, std::uint64_t seed, int complexity) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  const BoxGrid g = BoxGrid::make(fp, rng);
  StepElement t = StepElement::identity();
  for (int i = 0; i < complexity; ++i) {
    StepElement step;
    switch (rng() % 3) {
      case 0: step = vertical_rotation(fp, g, rng); break;
      case 1: step = vertical_swap(fp, g, rng); break;
      default: step = wrap_swap(fp, g, rng); break;
    }
    t = t.compose(fp, step);
  }
  return t;
}

StepElement mixed_element(const FlowParams& fp, std::uint64_t seed, int complexity) {
  std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 7);
  StepElement t = grid_element(fp, rng(), std::max(1, complexity - 2));
  for (int i = 0; i < 2; ++i) {
    if (rng() % 2 == 0) {
      const Quad shift = Quad(Rational(draw(rng, -6, 6), 5)) * fp.roof_q();
      t = t.compose(fp, StepElement::flow_shift(fp, shift));
    } else {
      const auto section = CrossSection::build(
          fp, IntervalSet::single(Quad(0), Quad(Rational(1, draw(rng, 1, 2)))));
      t = StepElement::cell_rotation(section, Rational(1, draw(rng, 2, 5))).compose(fp, t);
    }
  }
  return t;
}

StepElement monotone_bands(const FlowParams& fp, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0xda942042e4dd58b5ULL + 3);
  const Quad h = fp.roof_q();
  const long m = draw(rng, 6, 12);  // split the roof into m slots
  const Quad slot = h / Quad(Rational(m));
  const long mu = draw(rng, 2, m - 3);
  const long mv = draw(rng, 1, m - mu - 1);
  const Quad u = slot * Quad(Rational(mu));   // forward band [0, u)
  const Quad v = slot * Quad(Rational(mv));   // backward band [u, u+v)
  // equal flux in the two bands keeps the index at zero
  const Quad ell = slot / Quad(Rational(draw(rng, 1, 3)));
  PieceList pieces;
  const Interval base{Quad(0), Quad(1)};
  pieces.push_back({base, {Quad(0), u - ell}, ell});
  pieces.push_back({base, {u - ell, u}, ell + (h - u)});
  pieces.push_back({base, {u + ell, u + v}, -ell});
  pieces.push_back({base, {u, u + ell}, -(ell + (h - v))});
  return StepElement::from_pieces(fp, std::move(pieces));
}

RectSet random_rects(const FlowParams& fp, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 11);
  RectSet out;
  const int n = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) {
    const Quad lo(Rational(draw(rng, 0, 90), 100));
    const Quad len(Rational(draw(rng, 2, 25), 100));
    const Quad hi = (lo + len < Quad(1)) ? lo + len : Quad(1);
    const Rational hl(draw(rng, 0, 5), 8), hh(draw(rng, 6, 8), 8);
    out = out.unite(RectSet::rect({lo, hi}, {Quad(hl) * fp.roof_q(), Quad(hh) * fp.roof_q()}));
  }
  return out;
}

TailedTranslation commensurator_element(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 29);
  TailedTranslation t = TailedTranslation::identity_on_halfline();
  const int steps = 2 + static_cast<int>(rng() % 4);
  for (int i = 0; i < steps; ++i) {
    if (rng() % 2 == 0) {
      t = t.compose(TailedTranslation::halfline_shift(Quad(Rational(draw(rng, -5, 5), 3))));
    } else {
      const Quad a(Rational(draw(rng, 0, 40), 7));
      const Quad b = a + Quad(1) + Quad(Rational(draw(rng, 0, 20), 5));
      t = t.compose(TailedTranslation::halfline_swap(a, b, Quad(Rational(draw(rng, 1, 6), 7))));
    }
  }
  return t;
}

TailedTranslation line_element(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x6a09e667f3bcc909ULL + 17);
  TailedTranslation t = TailedTranslation::line_shift(Quad(0));
  const int steps = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < steps; ++i) {
    if (rng() % 2 == 0) {
      t = t.compose(TailedTranslation::line_shift(Quad(Rational(draw(rng, -4, 4), 3))));
    } else {
      const Quad a(Rational(draw(rng, -20, 20), 4));
      const Quad b = a + Quad(1) + Quad(Rational(draw(rng, 0, 11), 5));
      t = t.compose(TailedTranslation::line_swap(a, b, Quad(Rational(draw(rng, 1, 4), 5))));
    }
  }
  return t;
}

}  // namespace l1flow::gen
