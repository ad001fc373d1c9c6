#ifndef L1FLOW_TAILED_SET_HPP
#define L1FLOW_TAILED_SET_HPP

#include <optional>

#include "l1flow/interval_set.hpp"

namespace l1flow {

/// Subset of the real line of the form
///   (-inf, neg_end) [optional]  u  middle  u  [pos_start, +inf) [optional]
/// with the bounded part disjoint from the rays.  Closed under the boolean
/// operations used by the commensurator module; measure is finite iff both
/// rays are absent.
class TailedSet {
 public:
  TailedSet() = default;
  static TailedSet bounded(IntervalSet middle);
  static TailedSet ray_right(const Quad& from);                 // [from, inf)
  static TailedSet ray_left(const Quad& upto);                  // (-inf, upto)
  static TailedSet half_line() { return ray_right(Quad()); }    // R>=0
  static TailedSet whole_line();

  bool has_left_ray() const { return neg_end_.has_value(); }
  bool has_right_ray() const { return pos_start_.has_value(); }
  const Quad& left_ray_end() const { return *neg_end_; }
  const Quad& right_ray_start() const { return *pos_start_; }
  const IntervalSet& middle() const { return middle_; }
  bool empty() const { return !has_left_ray() && !has_right_ray() && middle_.empty(); }

  bool finite_measure() const { return !has_left_ray() && !has_right_ray(); }
  /// Throws when a ray is present.
  Quad measure() const;

  bool contains(const Quad& x) const;
  TailedSet unite(const TailedSet& o) const;
  TailedSet intersect(const TailedSet& o) const;
  TailedSet subtract(const TailedSet& o) const;
  TailedSet sym_diff(const TailedSet& o) const;
  TailedSet translate(const Quad& t) const;
  bool contains_set(const TailedSet& o) const { return o.subtract(*this).empty(); }
  bool operator==(const TailedSet& o) const { return sym_diff(o).empty(); }

  /// Restriction to the window [-w, w) as a plain IntervalSet.
  IntervalSet clip(const Quad& w) const;

 private:
  std::optional<Quad> neg_end_;
  IntervalSet middle_;
  std::optional<Quad> pos_start_;
  void normalize();
};

}  // namespace l1flow

#endif
