#include "l1flow/interval_set.hpp"

#include <algorithm>

namespace l1flow {

IntervalSet::IntervalSet(std::initializer_list<Interval> parts) {
  *this = from_parts(std::vector<Interval>(parts));
}

IntervalSet IntervalSet::single(const Quad& lo, const Quad& hi) {
  IntervalSet s;
  if (lo < hi) s.parts_.push_back({lo, hi});
  return s;
}

IntervalSet IntervalSet::from_parts(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& p) { return !(p.lo < p.hi); });
  std::sort(parts.begin(), parts.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  IntervalSet out;
  for (auto& p : parts) {
    if (!out.parts_.empty() && p.lo <= out.parts_.back().hi) {
      if (out.parts_.back().hi < p.hi) out.parts_.back().hi = p.hi;
    } else {
      out.parts_.push_back(p);
    }
  }
  return out;
}

Quad IntervalSet::measure() const {
  Quad m;
  for (const auto& p : parts_) m += p.length();
  return m;
}

bool IntervalSet::contains(const Quad& x) const {
  for (const auto& p : parts_) {
    if (p.contains(x)) return true;
    if (x < p.lo) break;
  }
  return false;
}

bool IntervalSet::contains_set(const IntervalSet& other) const {
  return other.subtract(*this).empty();
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return from_parts(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<Interval> out;
  auto i = parts_.begin();
  auto j = o.parts_.begin();
  while (i != parts_.end() && j != o.parts_.end()) {
    const Quad lo = std::max(i->lo, j->lo, [](const Quad& x, const Quad& y) { return x < y; });
    const Quad hi = std::min(i->hi, j->hi, [](const Quad& x, const Quad& y) { return x < y; });
    if (lo < hi) out.push_back({lo, hi});
    if (i->hi < j->hi) ++i; else ++j;
  }
  return from_parts(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& o) const {
  std::vector<Interval> out;
  auto j = o.parts_.begin();
  for (auto p : parts_) {
    Quad cur = p.lo;
    while (j != o.parts_.end() && j->hi <= cur) ++j;
    auto k = j;
    while (k != o.parts_.end() && k->lo < p.hi) {
      if (cur < k->lo) out.push_back({cur, k->lo});
      if (cur < k->hi) cur = k->hi;
      ++k;
    }
    if (cur < p.hi) out.push_back({cur, p.hi});
  }
  return from_parts(std::move(out));
}

IntervalSet IntervalSet::sym_diff(const IntervalSet& o) const {
  return subtract(o).unite(o.subtract(*this));
}

IntervalSet IntervalSet::translate(const Quad& t) const {
  IntervalSet out;
  out.parts_ = parts_;
  for (auto& p : out.parts_) { p.lo += t; p.hi += t; }
  return out;
}

bool IntervalSet::operator==(const IntervalSet& o) const {
  if (parts_.size() != o.parts_.size()) return false;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].lo != o.parts_[i].lo || parts_[i].hi != o.parts_[i].hi) return false;
  }
  return true;
}

Quad mod_one(const Quad& t) { return t - Quad(Rational(t.floor())); }

IntervalSet circle_translate(const IntervalSet& a, const Quad& t) {
  const Quad one(Rational(1));
  const Quad shift = mod_one(t);
  std::vector<Interval> out;
  for (const auto& p : a.parts()) {
    Quad lo = p.lo + shift;
    Quad hi = p.hi + shift;
    if (hi <= one) {
      out.push_back({lo, hi});
    } else if (lo >= one) {
      out.push_back({lo - one, hi - one});
    } else {
      out.push_back({lo, one});
      out.push_back({Quad(), hi - one});
    }
  }
  return IntervalSet::from_parts(std::move(out));
}

}  // namespace l1flow
