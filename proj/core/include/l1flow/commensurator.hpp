#ifndef L1FLOW_COMMENSURATOR_HPP
#define L1FLOW_COMMENSURATOR_HPP

#include <optional>
#include <vector>

#include "l1flow/tailed_set.hpp"

namespace l1flow {

struct TransPiece {
  Interval dom;
  Quad shift;
};

/// Measure-preserving piecewise translation of a subset of the line.
/// Finitely many translated pieces inside the window [-M, M); outside the
/// window the map acts affinely on the engaged tails: x |-> x + tau- for
/// x < -M, x |-> x + tau+ for x >= M.  A disengaged tail means the
/// corresponding ray is not part of the domain.
///
/// With the right tail engaged and the left one absent, both domain and
/// range differ from the half-line [0, inf) by a bounded set, so the map
/// represents an element of the self-commensurating semigroup of the
/// half-line; the index map lives here.
class TailedTranslation {
 public:
  TailedTranslation() : window_(Rational(1)) { right_tail_ = Quad(); }

  static TailedTranslation identity_on_halfline();
  /// x |-> x + t with domain [0, inf).
  static TailedTranslation halfline_shift(const Quad& t);
  /// x |-> x + t on the whole line (both tails engaged).
  static TailedTranslation line_shift(const Quad& t);
  /// Swaps [a, a+len) and [b, b+len), identity on the rest of [0, inf).
  static TailedTranslation halfline_swap(const Quad& a, const Quad& b, const Quad& len);
  /// Swaps two intervals, identity on the rest of the line.
  static TailedTranslation line_swap(const Quad& a, const Quad& b, const Quad& len);
  static TailedTranslation make(Quad window, std::vector<TransPiece> pieces,
                                std::optional<Quad> left_tail, std::optional<Quad> right_tail);

  const Quad& window() const { return window_; }
  const std::vector<TransPiece>& pieces() const { return pieces_; }
  const std::optional<Quad>& left_tail() const { return left_tail_; }
  const std::optional<Quad>& right_tail() const { return right_tail_; }

  TailedSet domain() const;
  TailedSet range() const;
  /// Domain and range are commensurate to the half-line [0, inf); decided
  /// structurally from the engaged tails.
  bool commensurates_halfline() const { return !left_tail_ && right_tail_.has_value(); }

  /// Throws unless piece domains are disjoint, images are disjoint, and
  /// both stay clear of the tail images.
  void validate() const;

  std::optional<Quad> apply(const Quad& x) const;

  /// this o other, with the domain shrunk to other^{-1}(rng other n dom this).
  TailedTranslation compose(const TailedTranslation& other) const;
  TailedTranslation inverse() const;
  /// T restricted to a subset of its domain; A must be commensurate to the
  /// half-line (a right ray engaged, no left ray).
  TailedTranslation restrict(const TailedSet& a) const;
  TailedTranslation restrict_to_halfline() const;

  /// lambda(dom \ rng) - lambda(rng \ dom); exact.
  Quad index() const;
  /// lambda(A \ rng) - lambda(A \ dom) for an ambient A containing both.
  Quad index_in_ambient(const TailedSet& ambient) const;

  /// Net signed length of translation arcs crossing the basepoint 0:
  /// lambda{z : z < 0 <= Tz} - lambda{z : Tz < 0 <= z}.  Requires the two
  /// tail shifts to agree (a nonzero net tail shift makes the crossing
  /// integral meaningless and is refused).
  Quad charge_index() const;

  /// True iff the two maps disagree on a set of finite measure, decided
  /// structurally from the tails; exact disagreement measure via
  /// disagreement_measure() when equivalent.
  bool equivalent(const TailedTranslation& other) const;
  Quad disagreement_measure(const TailedTranslation& other) const;

  /// Piecewise materialization of the graph over [-w, w): tail segments are
  /// expanded into explicit pieces.  Used by compose/audit code.
  std::vector<TransPiece> materialize(const Quad& w) const;

  Quad max_abs_shift() const;

 private:
  Quad window_;
  std::vector<TransPiece> pieces_;
  std::optional<Quad> left_tail_, right_tail_;
  void canonicalize();
};

}  // namespace l1flow

#endif
