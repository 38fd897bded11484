#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace daclab {

// Append-only bit buffer, MSB-first within each byte.
class BitSink {
 public:
  void push(int bit) {
    if ((nbits_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> (nbits_ & 7));
    ++nbits_;
  }

  uint64_t size_bits() const { return nbits_; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> take_bytes() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  uint64_t nbits_ = 0;
};

// Random-access bit view. Positions at or past the end read as 0 so a
// decoder can keep pulling bits after the payload runs out.
class BitSource {
 public:
  BitSource() = default;
  BitSource(std::vector<uint8_t> bytes, uint64_t nbits)
      : bytes_(std::move(bytes)), nbits_(nbits) {}

  int bit_at(uint64_t pos) const {
    if (pos >= nbits_) return 0;
    return (bytes_[pos >> 3] >> (7 - (pos & 7))) & 1;
  }

  uint64_t size_bits() const { return nbits_; }

 private:
  std::vector<uint8_t> bytes_;
  uint64_t nbits_ = 0;
};

}  // namespace daclab
