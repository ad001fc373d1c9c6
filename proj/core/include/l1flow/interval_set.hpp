#ifndef L1FLOW_INTERVAL_SET_HPP
#define L1FLOW_INTERVAL_SET_HPP

#include <initializer_list>
#include <vector>

#include "l1flow/quad.hpp"

namespace l1flow {

/// Half-open interval [lo, hi), lo < hi.  Empty intervals are never stored.
struct Interval {
  Quad lo, hi;
  Quad length() const { return hi - lo; }
  bool contains(const Quad& x) const { return lo <= x && x < hi; }
};

/// Canonical finite union of disjoint half-open intervals, sorted by lo,
/// with touching neighbours merged.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts);
  static IntervalSet single(const Quad& lo, const Quad& hi);
  /// Canonicalizes an arbitrary list (sorts, drops empties, merges).
  static IntervalSet from_parts(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const& { return parts_; }
  const std::vector<Interval>& parts() const&& = delete;
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  Quad measure() const;
  bool contains(const Quad& x) const;
  bool contains_set(const IntervalSet& other) const;
  Quad min() const { return parts_.front().lo; }
  Quad max() const { return parts_.back().hi; }

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet subtract(const IntervalSet& o) const;
  IntervalSet sym_diff(const IntervalSet& o) const;
  IntervalSet translate(const Quad& t) const;
  bool intersects(const IntervalSet& o) const { return !intersect(o).empty(); }

  bool operator==(const IntervalSet& o) const;

 private:
  std::vector<Interval> parts_;
};

/// {theta + t mod 1 : theta in A} for A inside [0, 1); exact, canonical.
IntervalSet circle_translate(const IntervalSet& a, const Quad& t);
/// t mod 1, in [0, 1).
Quad mod_one(const Quad& t);

}  // namespace l1flow

#endif
