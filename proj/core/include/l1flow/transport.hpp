#ifndef L1FLOW_TRANSPORT_HPP
#define L1FLOW_TRANSPORT_HPP

#include "l1flow/step_element.hpp"

namespace l1flow {

/// Offset segments of a set inside the cell of the section point (theta,0),
/// ordered along the orbit; exact endpoints.
std::vector<Interval> segments_in_cell(const Tessellation& tess, const RectSet& a,
                                       const Quad& theta);

/// Order-preserving piecewise translation mapping E onto F within every
/// tessellation cell.  Requires lambda_c(E) = lambda_c(F) for all c (checked
/// exactly); the result is a coherent partial map E -> F.
PieceList fiber_transport(const Tessellation& tess, const RectSet& e, const RectSet& f);

}  // namespace l1flow

#endif
