#ifndef L1FLOW_HOPF_HPP
#define L1FLOW_HOPF_HPP

#include "l1flow/arrival.hpp"

namespace l1flow {

/// Certified orbitwise Hopf decomposition of the support.
/// dissipative: both half-orbits provably meet every cell finitely often
///   (a certified monotone drift pushes them past their cell, or -- for
///   partial maps -- the tower terminates and its levels wander);
/// conservative: an exact cycle was found, so the orbit is periodic;
/// undecided: neither certificate was reached within the horizon.
struct HopfVerdict {
  RectSet dissipative, conservative, undecided;
  long horizon = 0;
};

HopfVerdict hopf_decomposition(const Tessellation& tess, const StepElement& t, long horizon = 256);

/// Same machinery on a partial piecewise map (a castle stage, say): orbits
/// stop where no piece applies.
HopfVerdict hopf_pieces(const Tessellation& tess, const PieceList& pieces, long horizon = 256);

}  // namespace l1flow

#endif
