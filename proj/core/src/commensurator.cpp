#include "l1flow/commensurator.hpp"

#include <algorithm>

namespace l1flow {

namespace {
const Quad kOne(Rational(1));

Quad qmax(const Quad& x, const Quad& y) { return x < y ? y : x; }
}  // namespace

TailedTranslation TailedTranslation::make(Quad window, std::vector<TransPiece> pieces,
                                          std::optional<Quad> left_tail,
                                          std::optional<Quad> right_tail) {
  TailedTranslation t;
  t.window_ = std::move(window);
  t.pieces_ = std::move(pieces);
  t.left_tail_ = std::move(left_tail);
  t.right_tail_ = std::move(right_tail);
  t.canonicalize();
  t.validate();
  return t;
}

TailedTranslation TailedTranslation::identity_on_halfline() {
  return make(kOne, {{{Quad(), kOne}, Quad()}}, std::nullopt, Quad());
}

TailedTranslation TailedTranslation::halfline_shift(const Quad& t) {
  const Quad w = qmax(kOne, t.abs() + kOne);
  return make(w, {{{Quad(), w}, t}}, std::nullopt, t);
}

TailedTranslation TailedTranslation::line_shift(const Quad& t) {
  const Quad w = qmax(kOne, t.abs() + kOne);
  return make(w, {{{-w, w}, t}}, t, t);
}

TailedTranslation TailedTranslation::halfline_swap(const Quad& a, const Quad& b,
                                                   const Quad& len) {
  if (a < Quad() || b < Quad()) throw error("halfline_swap: negative position");
  const Quad w = qmax(kOne, qmax(a + len, b + len) + kOne);
  std::vector<TransPiece> pieces = {{{a, a + len}, b - a}, {{b, b + len}, a - b}};
  IntervalSet rest = IntervalSet::single(Quad(), w)
                         .subtract(IntervalSet{{a, a + len}, {b, b + len}});
  for (const auto& p : rest.parts()) pieces.push_back({p, Quad()});
  return make(w, std::move(pieces), std::nullopt, Quad());
}

TailedTranslation TailedTranslation::line_swap(const Quad& a, const Quad& b, const Quad& len) {
  const Quad w = qmax(kOne, qmax(qmax(a.abs(), b.abs()) + len, Quad()) + kOne);
  std::vector<TransPiece> pieces = {{{a, a + len}, b - a}, {{b, b + len}, a - b}};
  IntervalSet rest = IntervalSet::single(-w, w)
                         .subtract(IntervalSet{{a, a + len}, {b, b + len}});
  for (const auto& p : rest.parts()) pieces.push_back({p, Quad()});
  return make(w, std::move(pieces), Quad(), Quad());
}

void TailedTranslation::canonicalize() {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const TransPiece& x, const TransPiece& y) { return x.dom.lo < y.dom.lo; });
  std::vector<TransPiece> merged;
  for (const auto& p : pieces_) {
    if (!(p.dom.lo < p.dom.hi)) continue;
    if (!merged.empty() && merged.back().dom.hi == p.dom.lo && merged.back().shift == p.shift) {
      merged.back().dom.hi = p.dom.hi;
    } else {
      merged.push_back(p);
    }
  }
  pieces_ = std::move(merged);
}

void TailedTranslation::validate() const {
  std::vector<Interval> doms, imgs;
  for (const auto& p : pieces_) {
    if (p.dom.lo < -window_ || p.dom.hi > window_)
      throw error("TailedTranslation: piece outside window");
    doms.push_back(p.dom);
    imgs.push_back({p.dom.lo + p.shift, p.dom.hi + p.shift});
  }
  auto disjoint = [](std::vector<Interval> v, const char* what) {
    std::sort(v.begin(), v.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].lo < v[i - 1].hi) throw error(std::string("TailedTranslation: overlapping ") + what);
  };
  disjoint(doms, "piece domains");
  disjoint(imgs, "piece images");
  for (const auto& im : imgs) {
    if (left_tail_ && im.lo < -window_ + *left_tail_)
      throw error("TailedTranslation: image overlaps left tail image");
    if (right_tail_ && im.hi > window_ + *right_tail_)
      throw error("TailedTranslation: image overlaps right tail image");
  }
}

TailedSet TailedTranslation::domain() const {
  std::vector<Interval> iv;
  for (const auto& p : pieces_) iv.push_back(p.dom);
  TailedSet s = TailedSet::bounded(IntervalSet::from_parts(std::move(iv)));
  if (left_tail_) s = s.unite(TailedSet::ray_left(-window_));
  if (right_tail_) s = s.unite(TailedSet::ray_right(window_));
  return s;
}

TailedSet TailedTranslation::range() const {
  std::vector<Interval> iv;
  for (const auto& p : pieces_) iv.push_back({p.dom.lo + p.shift, p.dom.hi + p.shift});
  TailedSet s = TailedSet::bounded(IntervalSet::from_parts(std::move(iv)));
  if (left_tail_) s = s.unite(TailedSet::ray_left(-window_ + *left_tail_));
  if (right_tail_) s = s.unite(TailedSet::ray_right(window_ + *right_tail_));
  return s;
}

std::optional<Quad> TailedTranslation::apply(const Quad& x) const {
  if (x < -window_) {
    if (!left_tail_) return std::nullopt;
    return x + *left_tail_;
  }
  if (x >= window_) {
    if (!right_tail_) return std::nullopt;
    return x + *right_tail_;
  }
  for (const auto& p : pieces_)
    if (p.dom.contains(x)) return x + p.shift;
  return std::nullopt;
}

std::vector<TransPiece> TailedTranslation::materialize(const Quad& w) const {
  std::vector<TransPiece> out;
  for (const auto& p : pieces_) {
    Interval d = p.dom;
    if (d.hi <= -w || d.lo >= w) continue;
    d.lo = qmax(d.lo, -w);
    d.hi = d.hi < w ? d.hi : w;
    if (d.lo < d.hi) out.push_back({d, p.shift});
  }
  if (left_tail_ && -w < -window_) out.push_back({{-w, -window_}, *left_tail_});
  if (right_tail_ && window_ < w) out.push_back({{window_, w}, *right_tail_});
  std::sort(out.begin(), out.end(),
            [](const TransPiece& x, const TransPiece& y) { return x.dom.lo < y.dom.lo; });
  return out;
}

Quad TailedTranslation::max_abs_shift() const {
  Quad m;
  for (const auto& p : pieces_) m = qmax(m, p.shift.abs());
  if (left_tail_) m = qmax(m, left_tail_->abs());
  if (right_tail_) m = qmax(m, right_tail_->abs());
  return m;
}

TailedTranslation TailedTranslation::compose(const TailedTranslation& other) const {
  // Window beyond which `other` followed by `this` is tail-on-tail.
  const Quad v = other.window_ + window_ + other.max_abs_shift() + max_abs_shift() + kOne;
  const Quad u = v + other.max_abs_shift() + kOne;
  const auto inner = other.materialize(v);
  const auto outer = materialize(u);

  std::vector<TransPiece> pieces;
  for (const auto& pi : inner) {
    const Interval img{pi.dom.lo + pi.shift, pi.dom.hi + pi.shift};
    for (const auto& po : outer) {
      const Quad lo = qmax(img.lo, po.dom.lo);
      const Quad hi = img.hi < po.dom.hi ? img.hi : po.dom.hi;
      if (lo < hi) pieces.push_back({{lo - pi.shift, hi - pi.shift}, pi.shift + po.shift});
    }
  }
  std::optional<Quad> lt, rt;
  if (other.left_tail_ && left_tail_) lt = *other.left_tail_ + *left_tail_;
  if (other.right_tail_ && right_tail_) rt = *other.right_tail_ + *right_tail_;
  return make(v, std::move(pieces), lt, rt);
}

TailedTranslation TailedTranslation::inverse() const {
  Quad w = window_ + max_abs_shift() + kOne;
  std::vector<TransPiece> pieces;
  for (const auto& p : pieces_)
    pieces.push_back({{p.dom.lo + p.shift, p.dom.hi + p.shift}, -p.shift});
  std::optional<Quad> lt, rt;
  if (left_tail_) {
    lt = -*left_tail_;
    if (-window_ + *left_tail_ < -w) {
      // tail image reaches past -w: fine, covered by the tail rule
    } else {
      pieces.push_back({{-w, -window_ + *left_tail_}, -*left_tail_});
    }
  }
  if (right_tail_) {
    rt = -*right_tail_;
    if (window_ + *right_tail_ < w)
      pieces.push_back({{window_ + *right_tail_, w}, -*right_tail_});
  }
  return make(w, std::move(pieces), lt, rt);
}

TailedTranslation TailedTranslation::restrict(const TailedSet& a) const {
  if (a.has_left_ray() || !a.has_right_ray())
    throw error("restrict: subset not commensurate to the half-line");
  if (!a.subtract(domain()).empty()) throw error("restrict: set not contained in the domain");
  Quad w = window_ + kOne;
  w = qmax(w, a.right_ray_start().abs() + kOne);
  for (const auto& p : a.middle().parts()) w = qmax(w, qmax(p.lo.abs(), p.hi.abs()) + kOne);
  const IntervalSet awin = a.clip(w);
  std::vector<TransPiece> pieces;
  for (const auto& p : materialize(w)) {
    const IntervalSet overlap = awin.intersect(IntervalSet::single(p.dom.lo, p.dom.hi));
    for (const auto& q : overlap.parts()) pieces.push_back({q, p.shift});
  }
  if (!right_tail_) throw error("restrict: domain lacks a right tail");
  return make(w, std::move(pieces), std::nullopt, *right_tail_);
}

TailedTranslation TailedTranslation::restrict_to_halfline() const {
  return restrict(domain().intersect(TailedSet::half_line()));
}

Quad TailedTranslation::index() const {
  const TailedSet d = domain(), r = range();
  return d.subtract(r).measure() - r.subtract(d).measure();
}

Quad TailedTranslation::index_in_ambient(const TailedSet& ambient) const {
  if (!ambient.contains_set(domain()) || !ambient.contains_set(range()))
    throw error("index_in_ambient: ambient set does not contain dom and rng");
  return ambient.subtract(range()).measure() - ambient.subtract(domain()).measure();
}

Quad TailedTranslation::charge_index() const {
  // The crossing picture requires a genuine automorphism of the line.
  if (!left_tail_ || !right_tail_ || !(domain() == TailedSet::whole_line()))
    throw error("charge_index: map must be defined on the whole line");
  if (*left_tail_ != *right_tail_)
    throw error("charge_index: nonzero net tail shift, crossing integral diverges");
  const Quad w = window_ + max_abs_shift() + kOne;
  Quad charge;
  for (const auto& p : materialize(w)) {
    const IntervalSet dom = IntervalSet::single(p.dom.lo, p.dom.hi);
    if (p.shift.sign() > 0) {
      charge += dom.intersect(IntervalSet::single(-p.shift, Quad())).measure();
    } else if (p.shift.sign() < 0) {
      charge -= dom.intersect(IntervalSet::single(Quad(), -p.shift)).measure();
    }
  }
  return charge;
}

bool TailedTranslation::equivalent(const TailedTranslation& other) const {
  auto same_tail = [](const std::optional<Quad>& x, const std::optional<Quad>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || *x == *y;
  };
  return same_tail(left_tail_, other.left_tail_) && same_tail(right_tail_, other.right_tail_);
}

Quad TailedTranslation::disagreement_measure(const TailedTranslation& other) const {
  if (!equivalent(other)) throw error("disagreement_measure: maps differ on a set of infinite measure");
  const Quad w = qmax(window_, other.window_) + kOne;
  const auto mine = materialize(w);
  const auto theirs = other.materialize(w);
  // Points where exactly one map is defined, or both are with different shifts.
  IntervalSet dom1, dom2;
  for (const auto& p : mine) dom1 = dom1.unite(IntervalSet::single(p.dom.lo, p.dom.hi));
  for (const auto& p : theirs) dom2 = dom2.unite(IntervalSet::single(p.dom.lo, p.dom.hi));
  Quad total = dom1.sym_diff(dom2).measure();
  for (const auto& p : mine) {
    for (const auto& q : theirs) {
      if (p.shift == q.shift) continue;
      const Quad lo = qmax(p.dom.lo, q.dom.lo);
      const Quad hi = p.dom.hi < q.dom.hi ? p.dom.hi : q.dom.hi;
      if (lo < hi) total += hi - lo;
    }
  }
  return total;
}

}  // namespace l1flow
