#ifndef L1FLOW_DECOMPOSITIONS_HPP
#define L1FLOW_DECOMPOSITIONS_HPP

#include <optional>

#include "l1flow/step_element.hpp"

namespace l1flow {

struct CycleAtom {
  PieceList orbit;  // position i holds the origin rect with the shift from
                    // position 0; length = cycle length
};

/// Exact cycle structure of a periodic element: every support point returns
/// to itself within the cap.  Throws on aperiodic input.
std::vector<CycleAtom> cycle_structure(const FlowParams& fp, const StepElement& t, long cap = 4096);

struct InvolutionPair {
  StepElement u, v;  // t = u o v, both involutions
};

/// Classical factorization of a periodic map into two involutions
/// (per cycle, the reversal pair).
InvolutionPair periodic_decomposition(const FlowParams& fp, const StepElement& t, long cap = 4096);

struct ThreeCyclePair {
  StepElement first, second;  // u = first o second, both 3-cycles
};

/// Writes an involution whose 2-cycles pair up into mirrored quadruples as
/// a product of two 3-cycles, via (12)(34) = (123)(423).  The mirror match
/// between 2-cycles is found along the flow; throws when no disjoint
/// mirror pairing exists.
ThreeCyclePair involution_to_three_cycles(const FlowParams& fp, const StepElement& u,
                                          long cap = 4096);

}  // namespace l1flow

#endif
