#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "daclab/ac_core.hpp"
#include "daclab/bitio.hpp"
#include "daclab/corr_models.hpp"

namespace daclab {

uint16_t quantize_p0(double p0);  // round to F bits, clamped to [1, 2^F - 1]
uint16_t quantize_k(double k);    // round to F bits, k in [0, 1)

// Per-block coding plan. Index i uses the widened pair (wide0_q, wide1_q)
// when it belongs to the active set and lies before the termination tail
// (the last t indexes); everywhere else it uses the plain source pair.
// Probabilities are quantized once, here; encoder and decoder never touch
// floating point again, so a schedule rebuilt from the same header fields
// is bit-exact.
struct EncoderSchedule {
  uint32_t n = 0;
  uint16_t t = 0;
  uint16_t p0_q = 0;
  uint16_t k_q = 0;
  uint32_t base0_q = 0, base1_q = 0;
  uint32_t wide0_q = 0, wide1_q = 0;
  uint8_t mode = 0;  // 0: single stream, 1: time-shared pair member
  uint8_t role = 0;  // mode 1: active residue of i mod 2
  std::optional<std::vector<uint8_t>> active;  // explicit mask, overrides role

  bool active_at(uint32_t i) const {
    if (active) return (*active)[i] != 0;
    return mode == 0 || i % 2 == role;
  }
  bool overlapped_at(uint32_t i) const {
    return static_cast<uint64_t>(i) + t < n && active_at(i) &&
           (wide0_q != base0_q || wide1_q != base1_q);
  }
  std::pair<uint32_t, uint32_t> probs_at(uint32_t i) const {
    if (static_cast<uint64_t>(i) + t >= n || !active_at(i))
      return {base0_q, base1_q};
    return {wide0_q, wide1_q};
  }
  double k_at(uint32_t i) const {
    return overlapped_at(i) ? k_q / 65536.0 : 0.0;
  }
};

// Power-rule schedule: widened probabilities p_j^(1 - k).
EncoderSchedule build_schedule(
    uint32_t n, uint32_t t, double k, double p0,
    std::optional<std::vector<uint8_t>> active = std::nullopt);

// Explicit widened pair (common-factor rule and friends). Such a schedule
// cannot be reconstructed from a container header, so it only serves
// in-memory encode/decode round trips.
EncoderSchedule build_schedule_probs(
    uint32_t n, uint32_t t, double pt0, double pt1, double p0,
    std::optional<std::vector<uint8_t>> active = std::nullopt);

// Serialized block: 4-byte magic "DAC1", then big-endian header fields
// version u8, mode u8, n u32, t u16, p0_q u16, k_q u16, payload_bits u32,
// a role u8 appended for mode 1, then the payload padded to a byte.
struct DacBitstream {
  uint8_t version = 1;
  uint8_t mode = 0;
  uint32_t n = 0;
  uint16_t t = 0;
  uint16_t p0_q = 0;
  uint16_t k_q = 0;
  uint8_t role = 0;
  uint32_t payload_bits = 0;
  std::vector<uint8_t> payload;

  std::vector<uint8_t> serialize() const;
  static DacBitstream parse(const std::vector<uint8_t>& raw);

  double rate() const { return static_cast<double>(payload_bits) / n; }
  EncoderSchedule schedule() const;
  BitSource payload_source() const { return BitSource(payload, payload_bits); }
};

DacBitstream encode(const std::vector<uint8_t>& x, const EncoderSchedule& sched);

// Decoder-tree primitives. test_one_symbol reports which branches the
// codeword window admits at index i; force_one_symbol advances the state
// along a chosen branch and reports whether the window stayed inside.
Region test_one_symbol(const CoderState& s, const EncoderSchedule& sched,
                       uint32_t i);
[[nodiscard]] bool force_one_symbol(CoderState& s, const EncoderSchedule& sched,
                                    uint32_t i, int symbol, const BitSource& src);

// log2 P(X = x | Y = y) under the correlation model.
double branch_metric(int x, int y, const CorrelationModel& corr);

struct DecodeResult {
  std::vector<uint8_t> x_hat;
  double metric = 0.0;        // winner's accumulated log2 posterior
  uint32_t peak_frontier = 0; // widest frontier reached
  uint64_t nodes_expanded = 0;
};

// M-algorithm decode against side information y (|y| = n). Per depth every
// frontier node is advanced (both ways when the window is ambiguous) and
// the best m candidates by metric survive, exact ties falling to earlier
// creation order. The winner is the best survivor whose re-encode
// reproduces the payload bit for bit (the stream has exactly one preimage
// per encoder run, so this conditions the choice on the full codeword);
// when no survivor does, the true path was pruned and the best survivor
// by metric stands in. Metric ties for the final winner resolve toward
// the lexicographically smallest sequence.
DecodeResult decode_with_schedule(const BitSource& payload,
                                  const EncoderSchedule& sched,
                                  const std::vector<uint8_t>& y,
                                  const CorrelationModel& corr, uint32_t m);
DecodeResult decode(const DacBitstream& bs, const std::vector<uint8_t>& y,
                    const CorrelationModel& corr, uint32_t m);

// Single-path decode for overlap-free schedules; needs no side information.
std::vector<uint8_t> decode_lossless(const DacBitstream& bs);

// Exhaustive maximum-posterior reference for n <= 20: forced decode of all
// 2^n sequences, keeping those whose window never leaves the interval, then
// argmax of the accumulated metric over the sequences that re-encode to the
// exact payload (falling back to all window-consistent ones when none do),
// ties toward the lexicographically smallest sequence. Mirrors decode.
struct OracleResult {
  std::vector<uint8_t> x_map;
  double metric = 0.0;
  uint64_t consistent = 0;  // number of sequences that survive forcing
};
OracleResult map_oracle(const DacBitstream& bs, const std::vector<uint8_t>& y,
                        const CorrelationModel& corr);

}  // namespace daclab
