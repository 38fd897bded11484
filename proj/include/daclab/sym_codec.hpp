#pragma once

#include <cstdint>
#include <vector>

#include "daclab/corr_models.hpp"
#include "daclab/dac_codec.hpp"

namespace daclab {

// Time-sharing role assignment: member j of a P-source group overlaps the
// indexes with i mod P == j. With P = 2, X takes the even indexes and Y the
// odd ones.
std::vector<uint8_t> role_mask(uint32_t n, uint32_t p, uint32_t residue);

// Schedule for one member of a time-shared pair (mode 1 container).
EncoderSchedule build_member_schedule(uint32_t n, uint32_t t, double k,
                                      double p0, uint8_t role);

// Independent encodings of the two sources under complementary role masks.
struct EncodedPair {
  DacBitstream x;
  DacBitstream y;
};
EncodedPair encode_pair(const std::vector<uint8_t>& x,
                        const std::vector<uint8_t>& y,
                        const EncoderSchedule& sched_x,
                        const EncoderSchedule& sched_y);

// One factor of the joint path posterior: for an even (X-active) index the
// posterior of x given the already-determined y, for an odd index the
// channel likelihood of y given x.
double joint_branch_metric(uint32_t i, int x, int y,
                           const CorrelationModel& corr);

struct JointDecodeResult {
  std::vector<uint8_t> x_hat;
  std::vector<uint8_t> y_hat;
  double metric = 0.0;
  uint32_t peak_frontier = 0;
  uint64_t nodes_expanded = 0;
};

// Joint M-algorithm over both streams. Per depth the inactive stream is
// advanced first (its plan is overlap free, so its symbol is determined),
// then the active stream, branching when ambiguous. The winner is the best
// surviving pair whose re-encodes reproduce both payloads bit for bit, the
// best survivor by metric standing in when none does. Throws RoleViolation
// when the streams claim the same residue or an inactive plan turns out
// ambiguous.
JointDecodeResult decode_pair(const DacBitstream& bx, const DacBitstream& by,
                              const CorrelationModel& corr, uint32_t m);

}  // namespace daclab
