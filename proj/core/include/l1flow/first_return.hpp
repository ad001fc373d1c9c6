#ifndef L1FLOW_FIRST_RETURN_HPP
#define L1FLOW_FIRST_RETURN_HPP

#include "l1flow/step_element.hpp"

namespace l1flow {

struct FirstReturnResult {
  PieceList partial;      // the first-return map on the resolved part
  StepElement map;        // identity-extension of `partial`; only meaningful
                          // when map_is_total (always true when complete)
  bool map_is_total = false;
  RectSet residual;       // points whose return was not resolved within the cap
  long max_steps = 0;     // largest return time among resolved points
  bool complete() const { return residual.empty(); }
  /// Integral of |rho| of the resolved part.
  Quad partial_norm(const FlowParams& fp) const;
};

/// Induced (first-return) transformation T_A, resolved symbolically by
/// iterating T on rectangle atoms; stops at `cap` iterations and reports the
/// unresolved part exactly.
FirstReturnResult induced_map(const FlowParams& fp, const StepElement& t, const RectSet& a,
                              long cap = 1024);

/// Intermitted transformation: first return of the T-orbit to the
/// tessellation class of the starting point.
FirstReturnResult intermitted_map(const Tessellation& tess, const StepElement& t, long cap = 1024);

/// Frontier atom used by the orbit-resolution machinery: a rectangle of
/// origins that has moved rigidly by the accumulated flow time `tau`.
struct OrbitAtom {
  Interval base;    // origin rectangle
  Interval height;
  Quad tau;         // accumulated shift; current position = origin + tau
  long col = -1;    // origin column index (backward hits to a section), when tracked
  RectSet current(const FlowParams& fp) const {
    return RectSet::rect(base, height).flowed(fp, tau);
  }
};

/// One T-step applied to an atom; the result atoms partition the input.
std::vector<OrbitAtom> step_atom(const FlowParams& fp, const StepElement& t, const OrbitAtom& a);
/// Same on a partial piece list: parts not covered by any piece keep tau.
std::vector<OrbitAtom> pieces_step_atom(const FlowParams& fp, const PieceList& pieces,
                                        const OrbitAtom& a);

}  // namespace l1flow

#endif
