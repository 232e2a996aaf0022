#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fidx/common.hpp"

namespace fidx {

// Classic VByte: 7 payload bits per byte, least significant group first. The
// most significant bit says whether the integer continues in the next byte.
// Decoding computes sum over i of (b_i mod 2^7) * 2^(7i).
inline void vbyte_encode(std::vector<std::uint8_t>& out, std::uint32_t x) {
  while (x >= 128) {
    out.push_back(static_cast<std::uint8_t>((x & 0x7Fu) | 0x80u));
    x >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(x));
}

inline std::uint32_t vbyte_decode(std::span<const std::uint8_t> buf, std::size_t& pos) {
  std::uint32_t v = 0;
  unsigned shift = 0;
  for (;;) {
    if (pos >= buf.size()) throw corruption_error("unterminated vbyte codeword");
    std::uint8_t b = buf[pos++];
    v |= static_cast<std::uint32_t>(b & 0x7Fu) << shift;
    if ((b & 0x80u) == 0) return v;
    shift += 7;
    if (shift >= 32) throw corruption_error("vbyte codeword exceeds 32 bits");
  }
}

inline std::size_t vbyte_size(std::uint32_t x) {
  std::size_t n = 1;
  while (x >= 128) {
    ++n;
    x >>= 7;
  }
  return n;
}

// Gaps are encoded as is; a zero first gap is a single 0x00 byte.
inline void vbyte_encode_doc(std::vector<std::uint8_t>& out,
                             std::span<const std::uint32_t> gaps) {
  for (std::uint32_t g : gaps) vbyte_encode(out, g);
}

inline std::vector<std::uint32_t> vbyte_decode_doc(std::span<const std::uint8_t> buf,
                                                   std::size_t nnz) {
  std::vector<std::uint32_t> gaps(nnz);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < nnz; ++i) gaps[i] = vbyte_decode(buf, pos);
  return gaps;
}

}  // namespace fidx
