#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "fidx/common.hpp"
#include "fidx/simd.hpp"
#include "fidx/sparse.hpp"
#include "fidx/values.hpp"

namespace fidx {

// StreamVByte: one 2-bit control per value (packed four to a control byte,
// value j of a quad in bits 2j..2j+1), data bytes stored separately. Control
// value c means the integer occupies c+1 little-endian data bytes.

inline unsigned svb_byte_count(std::uint32_t x) {
  return x < (1u << 8) ? 1u : x < (1u << 16) ? 2u : x < (1u << 24) ? 3u : 4u;
}

struct SvbBlock {
  std::vector<std::uint8_t> controls;
  std::vector<std::uint8_t> data;
};

// Per-document block: the trailing partial quad pads its control byte with
// zeros and no document shares a control byte with its neighbour.
inline SvbBlock svb_encode_doc(std::span<const std::uint32_t> gaps) {
  SvbBlock b;
  b.controls.assign((gaps.size() + 3) / 4, 0);
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    unsigned len = svb_byte_count(gaps[i]);
    b.controls[i >> 2] |= static_cast<std::uint8_t>((len - 1) << (2 * (i & 3)));
    std::uint32_t x = gaps[i];
    for (unsigned j = 0; j < len; ++j) {
      b.data.push_back(static_cast<std::uint8_t>(x));
      x >>= 8;
    }
  }
  return b;
}

// Data bytes implied by the controls for nnz values.
inline std::size_t svb_data_length(const std::uint8_t* controls, std::size_t nnz) {
  std::size_t len = 0;
  for (std::size_t i = 0; i < nnz; ++i) len += ((controls[i >> 2] >> (2 * (i & 3))) & 3u) + 1u;
  return len;
}

// Scalar decode: walks the control bits one value at a time.
inline void svb_decode_scalar(const std::uint8_t* controls, const std::uint8_t* data,
                              std::size_t data_len, std::size_t nnz, std::uint32_t* out) {
  std::size_t p = 0;
  for (std::size_t i = 0; i < nnz; ++i) {
    unsigned len = ((controls[i >> 2] >> (2 * (i & 3))) & 3u) + 1u;
    if (p + len > data_len) throw corruption_error("stream-vbyte data truncated");
    std::uint32_t v = 0;
    for (unsigned j = 0; j < len; ++j) v |= static_cast<std::uint32_t>(data[p + j]) << (8 * j);
    p += len;
    out[i] = v;
  }
}

// 256-entry shuffle table: the byte permutation that expands one quad of
// packed data bytes into four 32-bit lanes, plus the data bytes consumed.
// 0x80 marks a zero-filled output byte. This table is the portable
// specification of the vector decode; _mm_shuffle_epi8 consumes it directly.
struct SvbShuffleEntry {
  std::array<std::uint8_t, 16> pattern;
  std::uint8_t consumed;
};

namespace detail {
constexpr std::array<SvbShuffleEntry, 256> make_svb_shuffle() {
  std::array<SvbShuffleEntry, 256> t{};
  for (unsigned c = 0; c < 256; ++c) {
    std::uint8_t src = 0;
    for (unsigned v = 0; v < 4; ++v) {
      unsigned len = ((c >> (2 * v)) & 3u) + 1u;
      for (unsigned byte = 0; byte < 4; ++byte)
        t[c].pattern[4 * v + byte] =
            byte < len ? static_cast<std::uint8_t>(src + byte) : std::uint8_t(0x80);
      src = static_cast<std::uint8_t>(src + len);
    }
    t[c].consumed = src;
  }
  return t;
}
}  // namespace detail

inline constexpr auto kSvbShuffle = detail::make_svb_shuffle();

// Vector decode. Full quads go through the shuffle table — with
// _mm_shuffle_epi8 while 16 readable bytes remain, otherwise through the
// table-driven portable expansion. `readable` is the number of bytes that may
// legally be loaded from `data` (>= data_len; indexes pad their blob so whole
// documents can use the 16-byte loads).
inline void svb_decode_vector(const std::uint8_t* controls, const std::uint8_t* data,
                              std::size_t data_len, std::size_t readable, std::size_t nnz,
                              std::uint32_t* out) {
  std::size_t quads = nnz / 4;
  std::size_t p = 0;
  std::size_t i = 0;
#if defined(FIDX_SIMD_SSSE3)
  while (i < quads && p + 16 <= readable) {
    const SvbShuffleEntry& e = kSvbShuffle[controls[i]];
    if (p + e.consumed > data_len) throw corruption_error("stream-vbyte data truncated");
    __m128i raw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(data + p));
    __m128i pat = _mm_loadu_si128(reinterpret_cast<const __m128i*>(e.pattern.data()));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + 4 * i), _mm_shuffle_epi8(raw, pat));
    p += e.consumed;
    ++i;
  }
#endif
  for (; i < quads; ++i) {
    const SvbShuffleEntry& e = kSvbShuffle[controls[i]];
    if (p + e.consumed > data_len) throw corruption_error("stream-vbyte data truncated");
    std::uint8_t lanes[16];
    for (unsigned j = 0; j < 16; ++j) {
      std::uint8_t s = e.pattern[j];
      lanes[j] = (s & 0x80u) ? std::uint8_t(0) : data[p + s];
    }
    std::memcpy(out + 4 * i, lanes, 16);
    p += e.consumed;
  }
  if (std::size_t rest = nnz % 4; rest > 0)
    svb_decode_scalar(controls + quads, data + p, data_len - p, rest, out + 4 * quads);
  (void)readable;
}

// The paper's baseline kernel: decode all gaps into a buffer, prefix-sum to
// component ids, then read the buffer one entry at a time, multiplying
// f32-converted document values with gathered query values left to right.
template <ValueKind K>
inline float svb_dot_buffered(const std::uint8_t* controls, const std::uint8_t* data,
                              std::size_t data_len, std::size_t readable, std::size_t nnz,
                              const std::uint8_t* values, unsigned frac_bits,
                              const DenseQuery& q, std::uint32_t* scratch) {
  svb_decode_vector(controls, data, data_len, readable, nnz, scratch);
  ValueReader<K> rd(frac_bits);
  const float* qv = q.values.data();
  const std::uint32_t dim = q.dim();
  float acc = 0.0f;
  std::uint64_t comp = 0;
  for (std::size_t i = 0; i < nnz; ++i) {
    comp += scratch[i];
    if (comp >= dim)
      throw corruption_error("decoded component " + std::to_string(comp) +
                             " out of range for dim " + std::to_string(dim));
    acc += rd(values, i) * qv[comp];
  }
  return acc;
}

// --- shared-control stream mode -----------------------------------------------
// Demonstrates the cross-document control sharing of plain StreamVByte: the
// whole collection is one value stream, so a control byte may span two
// documents and decoding a document can force decoding trailing values of the
// previous one.

struct SvbStream {
  std::vector<std::uint8_t> controls;           // ceil(total_values / 4)
  std::vector<std::uint8_t> data;
  std::vector<std::uint64_t> value_offsets;     // per doc: index of its first value
  std::vector<std::uint64_t> group_data_offsets;  // per doc: data offset of its first value's quad
  std::uint64_t total_values = 0;

  std::size_t control_bytes() const { return controls.size(); }
};

inline SvbStream svb_encode_stream(const std::vector<std::vector<std::uint32_t>>& gap_streams) {
  SvbStream s;
  std::uint64_t total = 0;
  for (const auto& g : gap_streams) total += g.size();
  s.controls.assign(static_cast<std::size_t>((total + 3) / 4), 0);
  s.value_offsets.reserve(gap_streams.size());
  s.group_data_offsets.reserve(gap_streams.size());
  std::uint64_t v = 0;
  std::uint64_t quad_start_data = 0;  // data offset where the current quad began
  for (const auto& g : gap_streams) {
    s.value_offsets.push_back(v);
    s.group_data_offsets.push_back((v & 3u) == 0 ? s.data.size() : quad_start_data);
    for (std::uint32_t gap : g) {
      if ((v & 3u) == 0) quad_start_data = s.data.size();
      unsigned len = svb_byte_count(gap);
      s.controls[static_cast<std::size_t>(v >> 2)] |=
          static_cast<std::uint8_t>((len - 1) << (2 * (v & 3u)));
      std::uint32_t x = gap;
      for (unsigned j = 0; j < len; ++j) {
        s.data.push_back(static_cast<std::uint8_t>(x));
        x >>= 8;
      }
      ++v;
    }
  }
  s.total_values = v;
  return s;
}

// Decodes one document out of the shared stream. Decoding starts at the
// enclosing quad boundary, so up to three values belonging to the previous
// document are decompressed and discarded; their count is returned through
// extra_decoded.
inline std::vector<std::uint32_t> svb_stream_decode_doc(const SvbStream& s, std::size_t doc,
                                                        std::size_t nnz,
                                                        std::size_t* extra_decoded = nullptr) {
  std::uint64_t first = s.value_offsets[doc];
  std::uint64_t aligned = first & ~std::uint64_t(3);
  std::size_t lead = static_cast<std::size_t>(first - aligned);
  if (extra_decoded) *extra_decoded = lead;
  std::vector<std::uint32_t> buf(lead + nnz);
  std::size_t p = static_cast<std::size_t>(s.group_data_offsets[doc]);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    std::uint64_t vi = aligned + i;
    unsigned len = ((s.controls[static_cast<std::size_t>(vi >> 2)] >> (2 * (vi & 3u))) & 3u) + 1u;
    if (p + len > s.data.size()) throw corruption_error("stream-vbyte stream truncated");
    std::uint32_t x = 0;
    for (unsigned j = 0; j < len; ++j) x |= static_cast<std::uint32_t>(s.data[p + j]) << (8 * j);
    p += len;
    buf[i] = x;
  }
  buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(lead));
  return buf;
}

}  // namespace fidx
