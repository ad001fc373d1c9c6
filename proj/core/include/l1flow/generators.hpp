#ifndef L1FLOW_GENERATORS_HPP
#define L1FLOW_GENERATORS_HPP

#include <cstdint>

#include "l1flow/commensurator.hpp"
#include "l1flow/step_element.hpp"

namespace l1flow {

/// Deterministic element factories.  Every draw is reproducible from the
/// seed alone; no platform-dependent distributions are used.
namespace gen {

/// Product of box permutations over a seed-chosen finite grid (column atoms
/// refined through rotation translates, roof split into equal blocks).  The
/// result permutes finitely many boxes, so it is periodic and every
/// first-return computation resolves.
StepElement grid_element(const FlowParams& fp, std::uint64_t seed, int complexity = 4);

/// Grid element composed with rational flow shifts and cell rotations;
/// generally aperiodic, nonzero index.
StepElement mixed_element(const FlowParams& fp, std::uint64_t seed, int complexity = 4);

/// Monotone dissipative element of index zero: paired conveyor bands
/// translating mass forward in the lower band and backward in the upper
/// one at equal flux.
StepElement monotone_bands(const FlowParams& fp, std::uint64_t seed);

RectSet random_rects(const FlowParams& fp, std::uint64_t seed);

/// Random self-commensurating translation of the half-line.
TailedTranslation commensurator_element(std::uint64_t seed);
/// Random measure-preserving piecewise translation of the whole line.
TailedTranslation line_element(std::uint64_t seed);

}  // namespace gen
}  // namespace l1flow

#endif
