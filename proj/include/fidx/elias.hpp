#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fidx/bitio.hpp"
#include "fidx/common.hpp"

namespace fidx {

// Elias gamma: floor(log2 x) zeros, then the binary expansion of x.
// 2*floor(log2 x) + 1 bits total. x must be positive.
inline void gamma_encode(BitWriter& out, std::uint64_t x) {
  if (x == 0) throw validation_error("gamma code undefined for 0");
  unsigned l = static_cast<unsigned>(std::bit_width(x)) - 1;
  out.append_bits(0, l);
  out.append_bits(x, l + 1);
}

inline std::uint64_t gamma_decode(BitReader& in) {
  unsigned l = in.read_unary();
  return (std::uint64_t(1) << l) | in.read_bits(l);
}

// Elias delta: gamma(floor(log2 x) + 1), then the low floor(log2 x) bits of x.
inline void delta_encode(BitWriter& out, std::uint64_t x) {
  if (x == 0) throw validation_error("delta code undefined for 0");
  unsigned l = static_cast<unsigned>(std::bit_width(x)) - 1;
  gamma_encode(out, l + 1);
  out.append_bits(x & ((std::uint64_t(1) << l) - 1), l);
}

inline std::uint64_t delta_decode(BitReader& in) {
  unsigned l = static_cast<unsigned>(gamma_decode(in)) - 1;
  return (std::uint64_t(1) << l) | in.read_bits(l);
}

// Minimal binary code over an interval of m values: the first 2^ceil(log2 m) - m
// values take ceil(log2 m) - 1 bits, the rest take ceil(log2 m).
inline void minimal_binary_encode(BitWriter& out, std::uint64_t r, std::uint64_t m) {
  if (m <= 1) return;  // zero bits carry the only value
  unsigned b = static_cast<unsigned>(std::bit_width(m - 1));
  std::uint64_t thresh = (std::uint64_t(1) << b) - m;
  if (r < thresh)
    out.append_bits(r, b - 1);
  else
    out.append_bits(r + thresh, b);
}

inline std::uint64_t minimal_binary_decode(BitReader& in, std::uint64_t m) {
  if (m <= 1) return 0;
  unsigned b = static_cast<unsigned>(std::bit_width(m - 1));
  std::uint64_t thresh = (std::uint64_t(1) << b) - m;
  std::uint64_t v = in.read_bits(b - 1);
  if (v < thresh) return v;
  return ((v << 1) | in.read_bits(1)) - thresh;
}

// Zeta_k (Boldi-Vigna): with h the largest integer such that 2^(hk) <= x,
// emit h in unary (h zeros, one), then x - 2^(hk) as a minimal binary code
// over 2^((h+1)k) - 2^(hk) values. Zeta_1 coincides with gamma.
inline void zeta_encode(BitWriter& out, std::uint64_t x, unsigned k) {
  if (x == 0) throw validation_error("zeta code undefined for 0");
  if (k == 0) throw validation_error("zeta shape parameter must be >= 1");
  unsigned l = static_cast<unsigned>(std::bit_width(x)) - 1;  // floor(log2 x)
  unsigned h = l / k;
  out.append_bits(0, h);
  out.append_bits(1, 1);
  std::uint64_t base = std::uint64_t(1) << (h * k);
  std::uint64_t m = (std::uint64_t(1) << ((h + 1) * k)) - base;
  minimal_binary_encode(out, x - base, m);
}

inline std::uint64_t zeta_decode(BitReader& in, unsigned k) {
  unsigned h = in.read_unary();
  std::uint64_t base = std::uint64_t(1) << (h * k);
  std::uint64_t m = (std::uint64_t(1) << ((h + 1) * k)) - base;
  return base + minimal_binary_decode(in, m);
}

// --- per-document streams ----------------------------------------------------

struct BitCodecId {
  enum class Kind : std::uint8_t { Gamma, Delta, Zeta };
  Kind kind = Kind::Gamma;
  unsigned k = 2;  // Zeta shape parameter, ignored otherwise
};

namespace detail {
inline void bit_encode_one(BitWriter& out, std::uint64_t x, BitCodecId id) {
  switch (id.kind) {
    case BitCodecId::Kind::Gamma: gamma_encode(out, x); break;
    case BitCodecId::Kind::Delta: delta_encode(out, x); break;
    case BitCodecId::Kind::Zeta: zeta_encode(out, x, id.k); break;
  }
}
inline std::uint64_t bit_decode_one(BitReader& in, BitCodecId id) {
  switch (id.kind) {
    case BitCodecId::Kind::Gamma: return gamma_decode(in);
    case BitCodecId::Kind::Delta: return delta_decode(in);
    case BitCodecId::Kind::Zeta: return zeta_decode(in, id.k);
  }
  return 0;
}
}  // namespace detail

// Encodes a gap stream. The first gap is shifted by +1 (these codes cannot
// express 0); later gaps are already >= 1 and go through unchanged. nnz is
// stored by the enclosing index, not in the bitstream.
inline void bitcodec_encode_doc(BitWriter& out, std::span<const std::uint32_t> gaps,
                                BitCodecId id) {
  for (std::size_t i = 0; i < gaps.size(); ++i)
    detail::bit_encode_one(out, i == 0 ? std::uint64_t(gaps[i]) + 1 : gaps[i], id);
}

// Decodes nnz gaps, undoing the first-gap shift and rejecting any prefix sum
// that reaches dim.
inline std::vector<std::uint32_t> bitcodec_decode_doc(BitReader& in, std::size_t nnz,
                                                      BitCodecId id, std::uint32_t dim) {
  std::vector<std::uint32_t> gaps(nnz);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < nnz; ++i) {
    std::uint64_t g = detail::bit_decode_one(in, id);
    if (i == 0) {
      if (g == 0) throw corruption_error("zero codeword in bit stream");
      g -= 1;
    }
    sum += g;
    if (sum >= dim)
      throw corruption_error("decoded component " + std::to_string(sum) +
                             " out of range for dim " + std::to_string(dim));
    gaps[i] = static_cast<std::uint32_t>(g);
  }
  return gaps;
}

}  // namespace fidx
