#ifndef L1FLOW_FLOW_HPP
#define L1FLOW_FLOW_HPP

#include <optional>
#include <utility>
#include <vector>

#include "l1flow/interval_set.hpp"

namespace l1flow {

/// Suspension flow over the circle rotation by alpha with constant roof h:
/// phase space X = [0,1) x [0,h), normalized measure (dtheta x ds)/h.
struct FlowParams {
  Quad alpha = Quad(Rational(-1), Rational(1));  // sqrt(2) - 1
  Rational roof = Rational(1);

  Quad roof_q() const { return Quad(roof); }
  void check() const;
};

struct FlowPoint {
  Quad theta;  // in [0, 1)
  Quad s;      // in [0, roof)
  bool operator==(const FlowPoint& o) const { return theta == o.theta && s == o.s; }
};

/// x + t along the flow; exact wrap bookkeeping.
FlowPoint flow_by(const FlowParams& fp, const FlowPoint& x, const Quad& t);

/// The unique t with y = x + t when x and y share an orbit, otherwise
/// nullopt.  Decidable: the sqrt2-coefficient of theta_y - theta_x pins the
/// number of wraps.
std::optional<Quad> orbit_time(const FlowParams& fp, const FlowPoint& x, const FlowPoint& y);

struct ReturnPiece {
  Interval base;
  long k;  // first-return count of the rotation, >= 1
};

/// Cross section C = base x {s = 0} together with the rotation's
/// first-return partition in both directions.
class CrossSection {
 public:
  static CrossSection build(const FlowParams& fp, const IntervalSet& base, long cap = 1000000);

  const FlowParams& params() const { return fp_; }
  const IntervalSet& base() const { return base_; }
  const std::vector<ReturnPiece>& returns() const { return returns_; }
  const std::vector<ReturnPiece>& back_returns() const { return back_returns_; }

  long return_count(const Quad& theta) const;       // theta must lie in base
  long back_return_count(const Quad& theta) const;  // steps to previous hit
  Quad gap(const Quad& theta) const { return Quad(fp_.roof) * Quad(Rational(return_count(theta))); }
  Quad gap_prev(const Quad& theta) const {
    return Quad(fp_.roof) * Quad(Rational(back_return_count(theta)));
  }
  /// sigma_C on the base: theta -> theta + k(theta) alpha mod 1.
  Quad sigma(const Quad& theta) const;
  Quad sigma_inv(const Quad& theta) const;

  long max_return() const;
  long min_return() const;

  /// Sum over the return partition of k * |I|; equals 1 exactly for a
  /// genuine cross section (Kac identity), asserted in tests.
  Quad kac_sum() const;

  /// Partition of the whole circle by the backward hit count
  /// m(theta) = min{ j >= 0 : theta - j alpha in base }; the column of
  /// theta projects to the section point theta - m alpha.
  const std::vector<ReturnPiece>& column_partition() const { return columns_; }
  long column_index(const Quad& theta) const;  // m(theta)

 private:
  FlowParams fp_;
  IntervalSet base_;
  std::vector<ReturnPiece> returns_, back_returns_, columns_;
};

enum class TessKind { Canonical, Voronoi };

struct Tessellation {
  CrossSection section;
  TessKind kind = TessKind::Canonical;
};

/// Projection of x to its tessellation cell: the section point c and the
/// signed offset with x = c + offset.  Canonical cells are [c, sigma c);
/// Voronoi cells attach x to the nearest section point with ties going to
/// the earlier one.
std::pair<FlowPoint, Quad> project(const Tessellation& tess, const FlowPoint& x);

/// Finite unions of base x height rectangles, kept in a canonical slab
/// form: disjoint base intervals, each carrying a canonical height set;
/// adjacent slabs with equal heights are merged.
class RectSet {
 public:
  RectSet() = default;
  static RectSet rect(const Interval& base, const Interval& height);
  static RectSet from_slabs(std::vector<std::pair<Interval, IntervalSet>> slabs);
  static RectSet full(const FlowParams& fp);

  const std::vector<std::pair<Interval, IntervalSet>>& slabs() const& { return slabs_; }
  const std::vector<std::pair<Interval, IntervalSet>>& slabs() const&& = delete;
  bool empty() const { return slabs_.empty(); }
  Quad area() const;  // integral of height-length over the base
  Quad measure(const FlowParams& fp) const { return area() / fp.roof_q(); }
  IntervalSet heights_at(const Quad& theta) const;
  bool contains(const FlowPoint& x) const { return heights_at(x.theta).contains(x.s); }

  RectSet unite(const RectSet& o) const;
  RectSet intersect(const RectSet& o) const;
  RectSet subtract(const RectSet& o) const;
  bool intersects(const RectSet& o) const { return !intersect(o).empty(); }
  bool contains_set(const RectSet& o) const { return o.subtract(*this).empty(); }
  bool operator==(const RectSet& o) const;

  /// Image under the flow by t, split at roof wraps; exact.
  RectSet flowed(const FlowParams& fp, const Quad& t) const;

  std::vector<Quad> base_breakpoints() const;

  /// Balanced union of many sets; avoids the quadratic cost of a fold.
  static RectSet bulk_union(std::vector<RectSet> sets);

 private:
  std::vector<std::pair<Interval, IntervalSet>> slabs_;
};

/// Lebesgue measure of A along the orbit segment c + [off_lo, off_hi),
/// where c = (theta, 0); offsets may be negative.
Quad segment_measure(const FlowParams& fp, const RectSet& a, const Quad& theta,
                     const Quad& off_lo, const Quad& off_hi);

/// lambda_c(A) for the cell of the section point c = (theta, 0).
Quad fiber_measure(const Tessellation& tess, const RectSet& a, const Quad& theta);

/// Batch form: lambda_c(A) as a piecewise constant function of the base
/// coordinate; the pieces partition the section base.
std::vector<std::pair<Interval, Quad>> fiber_profile(const Tessellation& tess, const RectSet& a);

/// Common refinement of the base atoms of a cross section against a list
/// of extra breakpoints.
std::vector<Interval> refine_intervals(const std::vector<Interval>& atoms,
                                       const std::vector<Quad>& cuts);

/// A sub-cross-section [0, delta) whose rotation return times are all
/// >= min_return; delta is halved until the bound holds.
CrossSection sparse_section(const FlowParams& fp, long min_return, long cap = 1000000);

/// Finite partition of C into sub-sections, each with all within-orbit
/// consecutive distances > V.  Tower coloring with block lengths N, N+1
/// over a marker interval; at most ceil(V / min gap) + 2 classes.
std::vector<CrossSection> lacunary_partition(const CrossSection& c, const Quad& v);

/// Total measure of Voronoi cells, computed from both return partitions;
/// equals 1 exactly for every cross section (tested).
Quad voronoi_cell_measure_sum(const CrossSection& c);

}  // namespace l1flow

#endif
