#include "l1flow/tailed_set.hpp"

#include <algorithm>

namespace l1flow {

TailedSet TailedSet::bounded(IntervalSet middle) {
  TailedSet s;
  s.middle_ = std::move(middle);
  return s;
}

TailedSet TailedSet::ray_right(const Quad& from) {
  TailedSet s;
  s.pos_start_ = from;
  return s;
}

TailedSet TailedSet::ray_left(const Quad& upto) {
  TailedSet s;
  s.neg_end_ = upto;
  return s;
}

TailedSet TailedSet::whole_line() {
  TailedSet s;
  s.neg_end_ = Quad();
  s.pos_start_ = Quad();
  s.normalize();
  return s;
}

void TailedSet::normalize() {
  // Absorb middle parts touching a ray into the ray.
  bool changed = true;
  while (changed) {
    changed = false;
    if (neg_end_ && pos_start_ && *pos_start_ <= *neg_end_) {
      // Rays overlap: the set is the whole line.
      neg_end_ = Quad(Rational(0));
      pos_start_ = Quad(Rational(0));
      middle_ = IntervalSet();
      return;
    }
    std::vector<Interval> keep;
    for (const auto& p : middle_.parts()) {
      if (neg_end_ && p.lo <= *neg_end_) {
        if (p.hi > *neg_end_) { neg_end_ = p.hi; changed = true; }
      } else if (pos_start_ && p.hi >= *pos_start_) {
        if (p.lo < *pos_start_) { pos_start_ = p.lo; changed = true; }
      } else {
        keep.push_back(p);
      }
    }
    middle_ = IntervalSet::from_parts(std::move(keep));
  }
}

Quad TailedSet::measure() const {
  if (!finite_measure()) throw error("TailedSet: infinite measure");
  return middle_.measure();
}

bool TailedSet::contains(const Quad& x) const {
  if (neg_end_ && x < *neg_end_) return true;
  if (pos_start_ && x >= *pos_start_) return true;
  return middle_.contains(x);
}

namespace {

Quad breakpoint_window(const TailedSet& a, const TailedSet& b) {
  Quad w(Rational(1));
  auto widen = [&w](const Quad& x) {
    Quad m = x.abs() + Quad(Rational(1));
    if (w < m) w = m;
  };
  for (const TailedSet* s : {&a, &b}) {
    if (s->has_left_ray()) widen(s->left_ray_end());
    if (s->has_right_ray()) widen(s->right_ray_start());
    for (const auto& p : s->middle().parts()) { widen(p.lo); widen(p.hi); }
  }
  return w;
}

}  // namespace

IntervalSet TailedSet::clip(const Quad& w) const {
  IntervalSet window = IntervalSet::single(-w, w);
  IntervalSet out = middle_.intersect(window);
  if (neg_end_) out = out.unite(IntervalSet::single(-w, std::min(*neg_end_, w, [](const Quad& x, const Quad& y) { return x < y; })));
  if (pos_start_) out = out.unite(IntervalSet::single(std::max(*pos_start_, -w, [](const Quad& x, const Quad& y) { return x < y; }), w));
  return out;
}

#define L1FLOW_TAILED_BINOP(NAME, LEFT_COMB, RIGHT_COMB)                     \
  TailedSet TailedSet::NAME(const TailedSet& o) const {                     \
    const Quad w = breakpoint_window(*this, o);                             \
    TailedSet out;                                                          \
    const bool ln = has_left_ray(), lo_ = o.has_left_ray();                 \
    const bool rn = has_right_ray(), ro = o.has_right_ray();                \
    if (LEFT_COMB) out.neg_end_ = -w;                                       \
    if (RIGHT_COMB) out.pos_start_ = w;                                     \
    out.middle_ = clip(w).NAME(o.clip(w));                                  \
    out.normalize();                                                        \
    return out;                                                             \
  }

L1FLOW_TAILED_BINOP(unite, (ln || lo_), (rn || ro))
L1FLOW_TAILED_BINOP(intersect, (ln && lo_), (rn && ro))
L1FLOW_TAILED_BINOP(subtract, (ln && !lo_), (rn && !ro))
L1FLOW_TAILED_BINOP(sym_diff, (ln != lo_), (rn != ro))
#undef L1FLOW_TAILED_BINOP

TailedSet TailedSet::translate(const Quad& t) const {
  TailedSet out;
  if (neg_end_) out.neg_end_ = *neg_end_ + t;
  if (pos_start_) out.pos_start_ = *pos_start_ + t;
  out.middle_ = middle_.translate(t);
  return out;
}

}  // namespace l1flow
