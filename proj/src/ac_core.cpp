#include "daclab/ac_core.hpp"

namespace daclab {

namespace {

using P = FixedPointParams;

void put_with_pending(BitSink& sink, int bit, uint64_t& pending) {
  sink.push(bit);
  while (pending > 0) {
    sink.push(bit ^ 1);
    --pending;
  }
}

void renorm_encode(CoderState& s, BitSink& sink) {
  for (;;) {
    if (s.low + s.range <= P::kHalf) {
      put_with_pending(sink, 0, s.pending);
    } else if (s.low >= P::kHalf) {
      put_with_pending(sink, 1, s.pending);
      s.low -= P::kHalf;
    } else if (s.low >= P::kQuarter && s.low + s.range <= 3 * P::kQuarter) {
      ++s.pending;
      s.low -= P::kQuarter;
    } else {
      break;
    }
    s.low <<= 1;
    s.range <<= 1;
  }
}

int read_bit(CoderState& s, const BitSource& src) {
  if (s.cursor >= src.size_bits()) s.exhausted = true;
  return src.bit_at(s.cursor++);
}

void renorm_decode(CoderState& s, const BitSource& src) {
  for (;;) {
    if (s.low + s.range <= P::kHalf) {
      // no offset
    } else if (s.low >= P::kHalf) {
      s.low -= P::kHalf;
      s.value -= P::kHalf;
    } else if (s.low >= P::kQuarter && s.low + s.range <= 3 * P::kQuarter) {
      s.low -= P::kQuarter;
      s.value -= P::kQuarter;
    } else {
      break;
    }
    s.low <<= 1;
    s.range <<= 1;
    s.value = (s.value << 1) | static_cast<uint64_t>(read_bit(s, src));
  }
}

void apply_select(CoderState& s, const SubdivisionPlan& plan, int symbol) {
  if (symbol == 0) {
    s.range = plan.c0;
  } else {
    s.low += s.range - plan.c1;
    s.range = plan.c1;
  }
}

}  // namespace

SubdivisionPlan subdivide(const CoderState& s, uint32_t pt0_q, uint32_t pt1_q) {
  uint64_t c0 = (s.range * pt0_q) >> P::kF;
  uint64_t c1 = (s.range * pt1_q) >> P::kF;
  if (c0 == 0) c0 = 1;
  if (c1 == 0) c1 = 1;
  if (c0 + c1 < s.range) c0 = s.range - c1;
  return {c0, c1};
}

void encode_select(CoderState& s, const SubdivisionPlan& plan, int symbol,
                   BitSink& sink) {
  apply_select(s, plan, symbol);
  renorm_encode(s, sink);
}

void finalize(CoderState& s, BitSink& sink) {
  const uint64_t mid = s.low + s.range / 2;
  put_with_pending(sink, static_cast<int>((mid >> (P::kW - 1)) & 1), s.pending);
  put_with_pending(sink, static_cast<int>((mid >> (P::kW - 2)) & 1), s.pending);
}

CoderState decoder_init(const BitSource& src) {
  CoderState s;
  for (int i = 0; i < P::kW; ++i) {
    s.value = (s.value << 1) | static_cast<uint64_t>(read_bit(s, src));
  }
  return s;
}

Region classify(const CoderState& s, const SubdivisionPlan& plan) {
  const uint64_t off = s.value - s.low;
  if (off < s.range - plan.c1) return Region::kZero;
  if (off >= plan.c0) return Region::kOne;
  return Region::kAmbiguous;
}

bool decoder_select(CoderState& s, const SubdivisionPlan& plan, int symbol,
                    const BitSource& src) {
  apply_select(s, plan, symbol);
  if (s.value - s.low >= s.range) return false;  // wraps when value < low
  renorm_decode(s, src);
  return true;
}

}  // namespace daclab
