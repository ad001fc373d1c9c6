#ifndef L1FLOW_STACKING_HPP
#define L1FLOW_STACKING_HPP

#include "l1flow/castle.hpp"

namespace l1flow {

/// One level of the cutting-and-stacking construction of a bounded-cocycle
/// element acting ergodically on orbits.  The forward castle phi climbs by
/// +1 steps (with gluing jumps), the backward castle psi descends by -1;
/// their supports tile the working region at every level.
struct StackingLevel {
  long n = 0;
  CrossSection section;    // level cross section (base B_n x {0})
  IntervalSet d_base;      // base of the marker set D_n (= B_n - alpha)
  Castle phi, psi;
  RectSet a_basis;         // basis of phi:    B_n x [0, 2^-n)
  RectSet b_ceiling;       // ceiling of phi:  D_n + [-1/2 - 2^-n, -1/2)
  RectSet c_basis;         // basis of psi:    D_n + [-1/2, -1/2 + 2^-n)
  RectSet d_ceiling;       // ceiling of psi:  B_n x [1/2, 1/2 + 2^-n)
};

struct StackingState {
  FlowParams fp;  // roof in (2, 3); all level sets live over it
  std::vector<StackingLevel> levels;
  RectSet y;                  // working region: the section plus two time units
  StepElement closed;         // phi_N and psi_N closed into a bijection of y
  StepElement s;              // `closed` rewired across the leftover strip
  RectSet z, z_prime;         // the leftover strip and its mirror inside y
  Quad substitution_measure;  // mu(supp psi_N): the mass standing in for the
                              // unbuilt tail of the construction
};

struct StackingOptions {
  long levels = 3;
  long max_levels = 8;
  FlowParams fp{Quad(Rational(-1), Rational(1)), Rational(5, 2)};
  /// Section bases for levels >= 2 are [0, ell_n); must decrease strictly.
  /// Empty uses ell_n = 2^-(n+1).
  std::vector<Quad> vanishing;
};

/// Runs the construction level by level, auditing every invariant exactly
/// (castle structure, basis/ceiling formulas, the two translation
/// conditions, support halving, extension).  Throws on any violation.
StackingState build_stacking(const StackingOptions& opt);

struct RankOneRow {
  Interval atom;       // base atom of the level section
  Quad span;           // raw length of [c, iota_n(c))
  Quad interval_len;   // its intersection with the working region
  Quad covered;        // total length of the disjoint basis iterates inside
  Quad proportion() const { return covered / interval_len; }
};

/// Coverage of [c, iota_n(c)) within the working region by the iterates of
/// the level basis; the proportion equals 1 - 2^-n on every atom.
std::vector<RankOneRow> rank_one_diagnostic(const StackingState& st, long n);

struct AlternationStats {
  long samples = 0;
  long alternated = 0;        // samples with at least one step-sign alternation
  long max_alternations = 0;  // largest per-sample step alternation count
  long cumulative_alternated = 0;  // samples whose displacement rho(x, T^k x)
                                   // changes sign within the horizon
  double alternated_fraction() const {
    return samples ? static_cast<double>(alternated) / static_cast<double>(samples) : 0.0;
  }
  std::vector<long> per_sample;
};

/// Tracks the orbitwise motion of exact sample points: the sign pattern of
/// the individual steps (a translation never alternates, a cell rotation
/// repeats +,+,-) and of the accumulated displacement rho(x, T^k x).
AlternationStats sign_alternation_stats(const FlowParams& fp, const StepElement& t, long samples,
                                        long horizon);

}  // namespace l1flow

#endif
