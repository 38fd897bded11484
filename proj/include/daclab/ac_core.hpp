#pragma once

#include <cstdint>

#include "daclab/bitio.hpp"

namespace daclab {

// Register geometry of the fixed-point coder. The interval register is W
// bits wide, probabilities are quantized to F fractional bits.
struct FixedPointParams {
  static constexpr int kW = 32;
  static constexpr int kF = 16;
  static constexpr uint64_t kFull = uint64_t{1} << kW;
  static constexpr uint64_t kHalf = kFull >> 1;
  static constexpr uint64_t kQuarter = kFull >> 2;
  static constexpr uint32_t kProbOne = uint32_t{1} << kF;
};

// Shared interval state. The encoder uses low/range/pending, the decoder
// additionally tracks the codeword window and its read cursor. After every
// renormalization range > 2^(W-2), and low + range never exceeds 2^W.
struct CoderState {
  uint64_t low = 0;
  uint64_t range = FixedPointParams::kFull;
  uint64_t pending = 0;    // bits deferred until the next carry resolution
  uint64_t value = 0;      // decoder: W-bit window of the codeword
  uint64_t cursor = 0;     // decoder: next payload bit position
  bool exhausted = false;  // decoder: a read went past the payload end
};

// Widths of the two (possibly overlapping) subintervals. The 0-interval is
// anchored at low, the 1-interval ends at low + range, so the layout is
//   only-0:  [low, low + range - c1)
//   overlap: [low + range - c1, low + c0)
//   only-1:  [low + c0, low + range)
// with overlap width c0 + c1 - range >= 0.
struct SubdivisionPlan {
  uint64_t c0 = 0;
  uint64_t c1 = 0;
};

enum class Region { kZero, kOne, kAmbiguous };

// Splits the current interval for quantized probabilities pt0_q, pt1_q in
// [1, 2^F]. Each width is at least 1, and a rounding gap (possible only
// when pt0_q + pt1_q == 2^F) is closed by widening c0, so the two
// subintervals always cover the interval exactly or overlap.
SubdivisionPlan subdivide(const CoderState& s, uint32_t pt0_q, uint32_t pt1_q);

// Narrows the interval to the chosen symbol's subinterval and renormalizes,
// emitting determined leading bits into the sink.
void encode_select(CoderState& s, const SubdivisionPlan& plan, int symbol,
                   BitSink& sink);

// Flushes the terminal state: the midpoint low + range/2 truncated to two
// guard bits (plus any pending carry bits). Any decoder value formed from
// the emitted stream followed by arbitrary padding lies in the final
// interval.
void finalize(CoderState& s, BitSink& sink);

// Fills the decoder window with the first W payload bits (zero padded).
CoderState decoder_init(const BitSource& src);

// Locates the codeword window within the plan's three regions.
// Precondition: value in [low, low + range).
Region classify(const CoderState& s, const SubdivisionPlan& plan);

// Mirrors encode_select on the decoder state, consuming payload bits during
// renormalization. Returns false when the window falls outside the chosen
// subinterval, i.e. the forced branch is one the encoder cannot have taken;
// the state is unspecified afterwards.
[[nodiscard]] bool decoder_select(CoderState& s, const SubdivisionPlan& plan,
                                  int symbol, const BitSource& src);

}  // namespace daclab
