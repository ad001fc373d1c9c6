#ifndef L1FLOW_CASTLE_HPP
#define L1FLOW_CASTLE_HPP

#include "l1flow/step_element.hpp"

namespace l1flow {

/// Partial injective piecewise flow-translation whose orbit graph consists
/// of finite towers: iterates of the basis (dom minus rng) are pairwise
/// disjoint and cover the support.
struct Castle {
  PieceList pieces;

  RectSet dom() const { return pieces_domain(pieces); }
  RectSet rng(const FlowParams& fp) const { return pieces_image(fp, pieces); }
  RectSet support(const FlowParams& fp) const { return dom().unite(rng(fp)); }
  RectSet basis(const FlowParams& fp) const { return dom().subtract(rng(fp)); }
  RectSet ceiling(const FlowParams& fp) const { return rng(fp).subtract(dom()); }
};

struct CastleReport {
  bool valid = false;
  long height = 0;  // number of basis iterates until exhaustion
  std::vector<std::string> violations;
};

/// Exact audit: injectivity, disjointness of the basis iterates, covering
/// of the support.
CastleReport castle_validate(const FlowParams& fp, const Castle& c, long cap = 100000);

/// The map basis -> ceiling obtained by composing along each tower column.
PieceList vec_map(const FlowParams& fp, const Castle& c, long cap = 100000);

/// Union of two castles with disjoint supports.
Castle castle_union(const FlowParams& fp, const Castle& a, const Castle& b);

/// Forward saturation of a subset of the basis: the union of its iterates.
RectSet castle_saturation(const FlowParams& fp, const Castle& c, const RectSet& part,
                          long cap = 100000);

}  // namespace l1flow

#endif
