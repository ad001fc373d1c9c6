#ifndef L1FLOW_ARRIVAL_HPP
#define L1FLOW_ARRIVAL_HPP

#include <optional>

#include "l1flow/first_return.hpp"

namespace l1flow {

/// Sign-invariance certificate: the positively and negatively shifted parts
/// of the support are each forward-invariant (up to exiting the support).
/// Together with the strictly positive minimal step this certifies that the
/// element is monotone, hence dissipative.
struct MonotoneCertificate {
  bool monotone = false;
  RectSet positive;  // the forward-escaping half of the support
  RectSet negative;  // the backward-escaping half
  std::vector<std::string> violations;
};

MonotoneCertificate certify_monotone(const FlowParams& fp, const StepElement& t);

/// One resolved transfer level: the arrival points with transfer value n
/// and the partial map tau_C = T^n onto the matching departure level.
struct TransferLevel {
  long n = 0;
  PieceList to_departure;  // domain: arrival part with transfer value n
};

struct ArrivalDeparture {
  RectSet arrival, departure;
  RectSet arrival_pos, arrival_neg;      // splits along the evasive halves
  RectSet departure_pos, departure_neg;
  /// Departure points whose jump lands in the adjacent class (next class
  /// on the positive side, previous on the negative one).
  RectSet departure_adjacent;
  RectSet arrival_adjacent;
  std::vector<TransferLevel> levels;
  RectSet transfer_residual;  // arrival points unresolved within the cap
  MonotoneCertificate cert;

  /// Transfer function on the resolved levels.
  PieceList transfer() const;
};

/// Arrival/departure machinery of a monotone element over a tessellation.
/// Throws if the monotonicity certificate fails, unless accept_partial.
ArrivalDeparture arrival_departure(const Tessellation& tess, const StepElement& t, long cap = 256,
                                   bool accept_partial = false);

/// The set {x in supp T : cell(Tx) != cell(x)} (departure) or the image
/// analogue (arrival); exact.
RectSet departure_set(const Tessellation& tess, const StepElement& t);

/// lambda-measure profile of forward jumps over each section point:
/// zeta(c) = lambda{x in P : x < c <= Tx} for the positive part P, and the
/// mirror version for the negative part.
std::vector<std::pair<Interval, Quad>> jump_profile(const Tessellation& tess,
                                                    const StepElement& t, bool positive);

}  // namespace l1flow

#endif
