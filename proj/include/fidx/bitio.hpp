#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "fidx/common.hpp"

namespace fidx {

// Append-only bit buffer. Bit order is most-significant-bit-first within each
// byte; trailing pad bits of the last byte are zero.
class BitWriter {
 public:
  // Appends the low nbits of value, most significant first. nbits <= 64.
  void append_bits(std::uint64_t value, unsigned nbits) {
    while (nbits > 0) {
      unsigned fill = static_cast<unsigned>(bit_len_ & 7u);
      if (fill == 0) bytes_.push_back(0);
      unsigned room = 8 - fill;
      unsigned take = nbits < room ? nbits : room;
      std::uint8_t chunk =
          static_cast<std::uint8_t>((value >> (nbits - take)) & ((1u << take) - 1u));
      bytes_.back() |= static_cast<std::uint8_t>(chunk << (room - take));
      bit_len_ += take;
      nbits -= take;
    }
  }

  void append_bit(bool b) { append_bits(b ? 1u : 0u, 1); }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>&& take_bytes() { return std::move(bytes_); }
  std::uint64_t bit_size() const { return bit_len_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_len_ = 0;
};

// Sequential reader over a bit buffer with the same MSB-first order. Reading
// past bit_len raises corruption_error.
class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::uint64_t bit_len)
      : data_(data), bit_len_(bit_len) {}
  explicit BitReader(std::span<const std::uint8_t> bytes)
      : BitReader(bytes.data(), 8 * static_cast<std::uint64_t>(bytes.size())) {}

  std::uint64_t position() const { return pos_; }
  std::uint64_t bits_left() const { return bit_len_ - pos_; }

  std::uint64_t read_bits(unsigned n) {
    if (n == 0) return 0;
    if (n > bits_left()) throw corruption_error("bit stream truncated");
    std::uint64_t v = 0;
    unsigned got = 0;
    while (got < n) {
      std::uint64_t byte_i = pos_ >> 3;
      unsigned off = static_cast<unsigned>(pos_ & 7u);
      unsigned take = 8 - off;
      if (take > n - got) take = n - got;
      std::uint8_t chunk = static_cast<std::uint8_t>(
          (data_[byte_i] >> (8 - off - take)) & ((1u << take) - 1u));
      v = (v << take) | chunk;
      pos_ += take;
      got += take;
    }
    return v;
  }

  bool read_bit() { return read_bits(1) != 0; }

  // Counts zeros up to and consuming the terminating one bit.
  unsigned read_unary() {
    unsigned zeros = 0;
    for (;;) {
      if (pos_ >= bit_len_) throw corruption_error("bit stream truncated in unary code");
      std::uint64_t byte_i = pos_ >> 3;
      unsigned off = static_cast<unsigned>(pos_ & 7u);
      std::uint8_t rest = static_cast<std::uint8_t>(data_[byte_i] << off);
      unsigned avail = 8 - off;
      if (bit_len_ - pos_ < avail) avail = static_cast<unsigned>(bit_len_ - pos_);
      unsigned lead = rest == 0 ? 8u : static_cast<unsigned>(std::countl_zero(rest));
      if (lead >= avail) {
        zeros += avail;
        pos_ += avail;
      } else {
        zeros += lead;
        pos_ += lead + 1;  // consume the one
        return zeros;
      }
    }
  }

 private:
  const std::uint8_t* data_;
  std::uint64_t bit_len_;
  std::uint64_t pos_ = 0;
};

}  // namespace fidx
