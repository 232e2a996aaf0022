#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "fidx/common.hpp"
#include "fidx/simd.hpp"
#include "fidx/values.hpp"

namespace fidx {

// DotVByte: a byte codec for 16-bit gap streams built for fused inner-product
// scans. Gaps are compressed in groups of 8 with a single control bit each
// (0: one data byte, 1: two little-endian data bytes), so one control byte
// describes a whole group and the data bytes it consumes are recoverable from
// its popcount. Documents are always aligned: the nnz mod 8 trailing
// components are stored as raw absolute 16-bit ids, and no control byte is
// ever shared between two documents.
//
// Per-document payload layout: [control bytes][data bytes][tail ids].

inline constexpr std::size_t kDvbGroup = 8;
// Bytes beyond the payload that the vectorized routines may read.
inline constexpr std::size_t kDvbLoadSlack = 16;

inline std::size_t dvb_group_count(std::size_t nnz) { return nnz / kDvbGroup; }
inline std::size_t dvb_tail_count(std::size_t nnz) { return nnz % kDvbGroup; }

// Data bytes implied by the control bytes alone.
inline std::size_t dvb_data_length(const std::uint8_t* controls, std::size_t ngroups) {
  std::size_t len = kDvbGroup * ngroups;
  for (std::size_t i = 0; i < ngroups; ++i)
    len += static_cast<std::size_t>(std::popcount(controls[i]));
  return len;
}

inline std::size_t dvb_payload_size(const std::uint8_t* payload, std::size_t nnz) {
  std::size_t g = dvb_group_count(nnz);
  return g + dvb_data_length(payload, g) + 2 * dvb_tail_count(nnz);
}

// Encodes one document's ascending component ids and appends the payload to
// out. The first gap is the absolute first id; all ids must fit in 16 bits.
inline void dvb_encode_doc(std::vector<std::uint8_t>& out,
                           std::span<const std::uint32_t> components) {
  std::size_t g = dvb_group_count(components.size());
  std::size_t ctrl = out.size();
  out.insert(out.end(), g, 0);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < g * kDvbGroup; ++i) {
    std::uint32_t gap = components[i] - prev;
    prev = components[i];
    if (gap >= 65536)
      throw validation_error("gap " + std::to_string(gap) + " does not fit 16 bits");
    if (gap < 256) {
      out.push_back(static_cast<std::uint8_t>(gap));
    } else {
      out[ctrl + i / kDvbGroup] |= static_cast<std::uint8_t>(1u << (i % kDvbGroup));
      out.push_back(static_cast<std::uint8_t>(gap));
      out.push_back(static_cast<std::uint8_t>(gap >> 8));
    }
  }
  for (std::size_t i = g * kDvbGroup; i < components.size(); ++i) {
    if (components[i] >= 65536)
      throw validation_error("component " + std::to_string(components[i]) +
                             " does not fit 16 bits");
    put_u16(out, static_cast<std::uint16_t>(components[i]));
  }
}

// Scalar decode: iterates the 8 control bits of each group, prefix-summing
// gaps into absolute ids, then copies the tail ids verbatim. The payload must
// be well formed (see dvb_decode_doc_checked for the validating variant).
inline void dvb_decode_doc_scalar(const std::uint8_t* payload, std::size_t nnz,
                                  std::uint16_t* out) {
  std::size_t g = dvb_group_count(nnz);
  const std::uint8_t* data = payload + g;
  std::size_t p = 0;
  std::uint32_t carry = 0;
  for (std::size_t gi = 0; gi < g; ++gi) {
    std::uint8_t c = payload[gi];
    for (unsigned j = 0; j < kDvbGroup; ++j) {
      std::uint32_t gap = data[p++];
      if (c & (1u << j)) gap |= static_cast<std::uint32_t>(data[p++]) << 8;
      carry += gap;
      out[kDvbGroup * gi + j] = static_cast<std::uint16_t>(carry);
    }
  }
  const std::uint8_t* tail = data + p;
  for (std::size_t t = 0; t < dvb_tail_count(nnz); ++t)
    out[g * kDvbGroup + t] =
        static_cast<std::uint16_t>(tail[2 * t] | (tail[2 * t + 1] << 8));
}

// Shuffle table: for each control byte, the byte permutation expanding its
// packed data bytes into 8 little-endian 16-bit lanes (0x80 = zero fill) and
// the count of data bytes consumed. The table is the portable specification
// of the vector decode; _mm_shuffle_epi8 consumes entries directly.
struct DvbShuffleEntry {
  std::array<std::uint8_t, 16> pattern;
  std::uint8_t consumed;
};

namespace detail {
constexpr std::array<DvbShuffleEntry, 256> make_dvb_shuffle() {
  std::array<DvbShuffleEntry, 256> t{};
  for (unsigned c = 0; c < 256; ++c) {
    std::uint8_t src = 0;
    for (unsigned lane = 0; lane < 8; ++lane) {
      bool wide = (c >> lane) & 1u;
      t[c].pattern[2 * lane] = src++;
      t[c].pattern[2 * lane + 1] = wide ? src++ : std::uint8_t(0x80);
    }
    t[c].consumed = src;
  }
  return t;
}
}  // namespace detail

inline constexpr auto kDvbShuffle = detail::make_dvb_shuffle();

#if defined(FIDX_SIMD_SSSE3)
namespace detail {
// Expands one group: shuffle to 8 u16 gap lanes, in-register inclusive prefix
// sum, then add the running carry. Returns the absolute ids; updates carry to
// the last id and advances data by the consumed byte count.
inline __m128i dvb_group_ids(const std::uint8_t*& data, std::uint8_t control,
                             __m128i& carry) {
  const DvbShuffleEntry& e = kDvbShuffle[control];
  __m128i raw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(data));
  __m128i pat = _mm_loadu_si128(reinterpret_cast<const __m128i*>(e.pattern.data()));
  __m128i gaps = _mm_shuffle_epi8(raw, pat);
  gaps = _mm_add_epi16(gaps, _mm_slli_si128(gaps, 2));
  gaps = _mm_add_epi16(gaps, _mm_slli_si128(gaps, 4));
  gaps = _mm_add_epi16(gaps, _mm_slli_si128(gaps, 8));
  __m128i ids = _mm_add_epi16(gaps, carry);
  carry = _mm_set1_epi16(static_cast<short>(_mm_extract_epi16(ids, 7)));
  data += e.consumed;
  return ids;
}
}  // namespace detail
#endif

// Vector decode with the same output as dvb_decode_doc_scalar. The caller
// must guarantee kDvbLoadSlack readable bytes past the payload end (index
// blobs are padded accordingly); without SSSE3 this runs the table-driven
// portable expansion.
inline void dvb_decode_doc_vector(const std::uint8_t* payload, std::size_t nnz,
                                  std::uint16_t* out) {
  std::size_t g = dvb_group_count(nnz);
  const std::uint8_t* data = payload + g;
#if defined(FIDX_SIMD_SSSE3)
  __m128i carry = _mm_setzero_si128();
  for (std::size_t gi = 0; gi < g; ++gi) {
    __m128i ids = detail::dvb_group_ids(data, payload[gi], carry);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + kDvbGroup * gi), ids);
  }
#else
  std::uint16_t carry = 0;
  for (std::size_t gi = 0; gi < g; ++gi) {
    const DvbShuffleEntry& e = kDvbShuffle[payload[gi]];
    std::uint16_t lanes[kDvbGroup];
    for (unsigned lane = 0; lane < kDvbGroup; ++lane) {
      std::uint8_t lo = e.pattern[2 * lane];
      std::uint8_t hi = e.pattern[2 * lane + 1];
      lanes[lane] = static_cast<std::uint16_t>(data[lo] |
                                               ((hi & 0x80u) ? 0u : (data[hi] << 8)));
    }
    for (unsigned lane = 0; lane < kDvbGroup; ++lane) {
      carry = static_cast<std::uint16_t>(carry + lanes[lane]);
      out[kDvbGroup * gi + lane] = carry;
    }
    data += e.consumed;
  }
#endif
  const std::uint8_t* tail = data;
  for (std::size_t t = 0; t < dvb_tail_count(nnz); ++t)
    out[g * kDvbGroup + t] =
        static_cast<std::uint16_t>(tail[2 * t] | (tail[2 * t + 1] << 8));
}

// Validating decode used by loaders: checks payload size, strict monotonicity
// (including tail ids against the last compressed id) and the dim bound.
inline std::vector<std::uint32_t> dvb_decode_doc_checked(const std::uint8_t* payload,
                                                         std::size_t payload_size,
                                                         std::size_t nnz, std::uint32_t dim) {
  std::size_t g = dvb_group_count(nnz);
  if (payload_size < g) throw corruption_error("dotvbyte payload shorter than its controls");
  if (dvb_payload_size(payload, nnz) != payload_size)
    throw corruption_error("dotvbyte payload size does not match controls");
  std::vector<std::uint32_t> ids(nnz);
  const std::uint8_t* data = payload + g;
  std::size_t p = 0;
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < g * kDvbGroup; ++i) {
    std::uint8_t c = payload[i / kDvbGroup];
    std::uint32_t gap = data[p++];
    if (c & (1u << (i % kDvbGroup))) gap |= static_cast<std::uint32_t>(data[p++]) << 8;
    if (i > 0 && gap == 0) throw corruption_error("zero gap inside dotvbyte group");
    carry += gap;
    if (carry >= dim)
      throw corruption_error("decoded component " + std::to_string(carry) +
                             " out of range for dim " + std::to_string(dim));
    ids[i] = static_cast<std::uint32_t>(carry);
  }
  const std::uint8_t* tail = data + p;
  std::uint64_t prev = carry;
  for (std::size_t t = 0; t < dvb_tail_count(nnz); ++t) {
    std::uint32_t id = static_cast<std::uint32_t>(tail[2 * t] | (tail[2 * t + 1] << 8));
    if (id >= dim)
      throw corruption_error("tail component " + std::to_string(id) +
                             " out of range for dim " + std::to_string(dim));
    bool first = (g == 0 && t == 0);
    if (!first && id <= prev)
      throw corruption_error("tail component " + std::to_string(id) + " not increasing");
    prev = id;
    ids[g * kDvbGroup + t] = id;
  }
  return ids;
}

namespace detail {
// Shared horizontal-reduction order for the 8 partial sums, so the scalar
// reference and the AVX2 kernel perform bit-identical additions.
inline float reduce8(const float* l) {
  float t0 = l[0] + l[4];
  float t1 = l[1] + l[5];
  float t2 = l[2] + l[6];
  float t3 = l[3] + l[7];
  float u0 = t0 + t2;
  float u1 = t1 + t3;
  return u0 + u1;
}

#if defined(FIDX_SIMD_AVX2)
inline float reduce8(__m256 acc) {
  __m128 lo = _mm256_castps256_ps128(acc);
  __m128 hi = _mm256_extractf128_ps(acc, 1);
  __m128 s = _mm_add_ps(lo, hi);                       // l0+l4 l1+l5 l2+l6 l3+l7
  __m128 sh = _mm_movehl_ps(s, s);                     // l2+l6 l3+l7 . .
  __m128 u = _mm_add_ps(s, sh);                        // u0 u1 . .
  __m128 r = _mm_add_ss(u, _mm_shuffle_ps(u, u, 1));   // u0+u1
  return _mm_cvtss_f32(r);
}
#endif
}  // namespace detail

// Fused scalar kernel with the vector path's semantics: per group, decode the
// 8 ids, gather query values, convert the 8 document values to f32 and fma
// into 8 partial sums; reduce at document end and add the scalar tail.
template <ValueKind K>
inline float dvb_dot_scalar(const std::uint8_t* payload, std::size_t nnz,
                            const std::uint8_t* values, unsigned frac_bits, const float* q) {
  ValueReader<K> rd(frac_bits);
  std::size_t g = dvb_group_count(nnz);
  const std::uint8_t* data = payload + g;
  std::size_t p = 0;
  std::uint32_t carry = 0;
  float lanes[kDvbGroup] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t gi = 0; gi < g; ++gi) {
    std::uint8_t c = payload[gi];
    for (unsigned j = 0; j < kDvbGroup; ++j) {
      std::uint32_t gap = data[p++];
      if (c & (1u << j)) gap |= static_cast<std::uint32_t>(data[p++]) << 8;
      carry += gap;
      lanes[j] = std::fma(rd(values, kDvbGroup * gi + j),
                          q[static_cast<std::uint16_t>(carry)], lanes[j]);
    }
  }
  float result = detail::reduce8(lanes);
  const std::uint8_t* tail = data + p;
  for (std::size_t t = 0; t < dvb_tail_count(nnz); ++t) {
    std::uint16_t id = static_cast<std::uint16_t>(tail[2 * t] | (tail[2 * t + 1] << 8));
    result += rd(values, g * kDvbGroup + t) * q[id];
  }
  return result;
}

#if defined(FIDX_SIMD_AVX2)
namespace detail {
template <ValueKind K>
inline __m256 dvb_load_values8(const std::uint8_t* values, std::size_t first, float scale);

template <>
inline __m256 dvb_load_values8<ValueKind::F32>(const std::uint8_t* values, std::size_t first,
                                               float) {
  return _mm256_loadu_ps(reinterpret_cast<const float*>(values) + first);
}

template <>
inline __m256 dvb_load_values8<ValueKind::FixedU8>(const std::uint8_t* values,
                                                   std::size_t first, float scale) {
  __m128i b = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(values + first));
  __m256 f = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(b));
  return _mm256_mul_ps(f, _mm256_set1_ps(scale));
}

#if defined(FIDX_SIMD_F16C)
template <>
inline __m256 dvb_load_values8<ValueKind::F16>(const std::uint8_t* values, std::size_t first,
                                               float) {
  __m128i h = _mm_loadu_si128(reinterpret_cast<const __m128i*>(values + 2 * first));
  return _mm256_cvtph_ps(h);
}
#endif
}  // namespace detail
#endif

#if defined(FIDX_SIMD_AVX2)
template <ValueKind K>
inline float dvb_dot_vector(const std::uint8_t* payload, std::size_t nnz,
                            const std::uint8_t* values, unsigned frac_bits, const float* q) {
#if defined(FIDX_SIMD_F16C)
  constexpr bool kCanLoadValues = true;
#else
  constexpr bool kCanLoadValues = (K != ValueKind::F16);
#endif
  if constexpr (!kCanLoadValues) {
    return dvb_dot_scalar<K>(payload, nnz, values, frac_bits, q);
  } else {
    ValueReader<K> rd(frac_bits);
    float scale = 1.0f;
    if constexpr (K == ValueKind::FixedU8) scale = rd.scale;
    std::size_t g = dvb_group_count(nnz);
    const std::uint8_t* data = payload + g;
    __m128i carry = _mm_setzero_si128();
    __m256 acc = _mm256_setzero_ps();
    for (std::size_t gi = 0; gi < g; ++gi) {
      __m128i ids = detail::dvb_group_ids(data, payload[gi], carry);
      __m256i idx = _mm256_cvtepu16_epi32(ids);
      __m256 qv = _mm256_i32gather_ps(q, idx, 4);
      __m256 dv = detail::dvb_load_values8<K>(values, kDvbGroup * gi, scale);
      acc = _mm256_fmadd_ps(dv, qv, acc);
    }
    float result = detail::reduce8(acc);
    const std::uint8_t* tail = data;
    for (std::size_t t = 0; t < dvb_tail_count(nnz); ++t) {
      std::uint16_t id = static_cast<std::uint16_t>(tail[2 * t] | (tail[2 * t + 1] << 8));
      result += rd(values, g * kDvbGroup + t) * q[id];
    }
    return result;
  }
}
#endif

// Fused kernel entry point: vectorized when the ISA allows, scalar otherwise.
template <ValueKind K>
inline float dvb_dot(const std::uint8_t* payload, std::size_t nnz, const std::uint8_t* values,
                     unsigned frac_bits, const float* q) {
#if defined(FIDX_SIMD_AVX2)
  return dvb_dot_vector<K>(payload, nnz, values, frac_bits, q);
#else
  return dvb_dot_scalar<K>(payload, nnz, values, frac_bits, q);
#endif
}

}  // namespace fidx
