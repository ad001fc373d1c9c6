#ifndef L1FLOW_STEP_ELEMENT_HPP
#define L1FLOW_STEP_ELEMENT_HPP

#include <string>
#include <vector>

#include "l1flow/flow.hpp"

namespace l1flow {

/// One translated rectangle: points of base x height move by `shift` along
/// the flow.
struct StepPiece {
  Interval base;
  Interval height;
  Quad shift;
  RectSet rect() const { return RectSet::rect(base, height); }
  bool operator==(const StepPiece& o) const {
    return base.lo == o.base.lo && base.hi == o.base.hi && height.lo == o.height.lo &&
           height.hi == o.height.hi && shift == o.shift;
  }
};

using PieceList = std::vector<StepPiece>;

RectSet pieces_domain(const PieceList& pieces);
RectSet pieces_image(const FlowParams& fp, const PieceList& pieces);
/// Image of a set under the partial map given by the pieces (points outside
/// the piece domains are dropped).
RectSet partial_image(const FlowParams& fp, const PieceList& pieces, const RectSet& a);
PieceList partial_inverse(const FlowParams& fp, const PieceList& pieces);
/// outer o inner on the overlap of ranges/domains; both maps partial.
PieceList partial_compose(const FlowParams& fp, const PieceList& outer, const PieceList& inner);
/// Restriction of the partial map to a sub-domain.
PieceList partial_restrict(const FlowParams& fp, const PieceList& pieces, const RectSet& dom);
/// Splits pieces into a canonical list (per-shift slab decomposition).
PieceList canonical_pieces(PieceList pieces, bool drop_zero_shift);

struct ValidationReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

/// Finite piecewise flow-translation extended by the identity: the
/// computable model of an element of the L1 full group.  Canonical form
/// holds no zero-shift pieces; the piece partition by shift value is the
/// level-set partition of the cocycle, so equal maps have equal piece
/// lists.
class StepElement {
 public:
  StepElement() = default;
  static StepElement identity() { return {}; }
  /// Canonicalizes and validates (throws on an invalid system).
  static StepElement from_pieces(const FlowParams& fp, PieceList pieces);
  /// Same, but returns the report instead of throwing.
  static ValidationReport check_pieces(const FlowParams& fp, const PieceList& pieces);

  /// Flow by t as a full-group element.
  static StepElement flow_shift(const FlowParams& fp, const Quad& t);
  /// Rotation by frac*gap inside every canonical cell of the section.
  static StepElement cell_rotation(const CrossSection& c, const Rational& frac);

  const PieceList& pieces() const& { return pieces_; }
  const PieceList& pieces() const&& = delete;
  bool is_identity() const { return pieces_.empty(); }

  RectSet domain_cells() const { return pieces_domain(pieces_); }
  RectSet image_cells(const FlowParams& fp) const { return pieces_image(fp, pieces_); }
  RectSet support() const { return pieces_domain(pieces_); }

  ValidationReport validate(const FlowParams& fp) const { return check_pieces(fp, pieces_); }

  FlowPoint apply(const FlowParams& fp, const FlowPoint& x) const;
  FlowPoint apply_inverse(const FlowParams& fp, const FlowPoint& x) const;
  /// rho_T(x): the displacement of x (zero offpieces).
  Quad cocycle(const FlowPoint& x) const;

  StepElement compose(const FlowParams& fp, const StepElement& inner) const;
  StepElement inverse(const FlowParams& fp) const;
  /// Conjugate: this o other o this^{-1}.
  StepElement conjugate(const FlowParams& fp, const StepElement& other) const;

  Quad norm_l1(const FlowParams& fp) const;  // integral of |rho_T|
  Quad index(const FlowParams& fp) const;    // integral of rho_T
  Quad max_abs_shift() const;

  bool operator==(const StepElement& o) const;

  /// Integral of |rho_T| over a subset.
  Quad norm_over(const FlowParams& fp, const RectSet& a) const;
  /// Integral of D(Tx, Sx) = |rho_T - rho_S|, exact.
  static Quad distance_l1(const FlowParams& fp, const StepElement& t, const StepElement& s);
  /// The set {x : Tx != Sx}.
  static RectSet disagreement(const FlowParams& fp, const StepElement& t, const StepElement& s);

 private:
  PieceList pieces_;
};

/// Pieces for a band of cell offsets [a, b) over a base atom contained in
/// one forward-return piece of the section.
RectSet cell_offsets(const CrossSection& c, const Interval& atom, const Quad& a, const Quad& b);

}  // namespace l1flow

#endif
