#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "fidx/common.hpp"

namespace fidx {

enum class ValueKind : std::uint8_t { F32 = 0, F16 = 1, FixedU8 = 2 };

// Storage format of the values array. frac_bits is meaningful for FixedU8
// only: codes are round(v * 2^frac_bits), dequantized as code * 2^-frac_bits.
struct ValueFormat {
  ValueKind kind = ValueKind::F32;
  std::uint8_t frac_bits = 0;

  std::size_t value_size() const {
    switch (kind) {
      case ValueKind::F32: return 4;
      case ValueKind::F16: return 2;
      case ValueKind::FixedU8: return 1;
    }
    return 4;
  }

  const char* name() const {
    switch (kind) {
      case ValueKind::F32: return "f32";
      case ValueKind::F16: return "f16";
      case ValueKind::FixedU8: return "fixedu8";
    }
    return "?";
  }
};

// --- IEEE binary16 conversion ------------------------------------------------
// Round-to-nearest-even, implemented in integer arithmetic so results do not
// depend on compiler or hardware support.

inline std::uint16_t float_to_half(float f) {
  std::uint32_t x = std::bit_cast<std::uint32_t>(f);
  std::uint32_t sign = (x >> 16) & 0x8000u;
  x &= 0x7FFFFFFFu;
  if (x > 0x7F800000u) return static_cast<std::uint16_t>(sign | 0x7E00u);  // nan
  if (x >= 0x47800000u) return static_cast<std::uint16_t>(sign | 0x7C00u);  // inf
  if (x <= 0x33000000u) return static_cast<std::uint16_t>(sign);  // <= 2^-25 rounds to zero
  std::uint32_t exp = x >> 23;
  if (exp < 113) {
    // subnormal half: quantum 2^-24
    std::uint32_t mant = (x & 0x7FFFFFu) | 0x800000u;
    std::uint32_t shift = 126 - exp;  // in [14, 24]
    std::uint32_t q = mant >> shift;
    std::uint32_t rem = mant & ((1u << shift) - 1u);
    std::uint32_t half = 1u << (shift - 1);
    if (rem > half || (rem == half && (q & 1u))) ++q;
    return static_cast<std::uint16_t>(sign | q);
  }
  std::uint32_t v = x - (112u << 23);
  std::uint32_t q = v >> 13;
  std::uint32_t rem = v & 0x1FFFu;
  if (rem > 0x1000u || (rem == 0x1000u && (q & 1u))) ++q;  // carry may round up to inf
  return static_cast<std::uint16_t>(sign | q);
}

inline float half_to_float(std::uint16_t h) {
  std::uint32_t exp = (h >> 10) & 0x1Fu;
  std::uint32_t mant = h & 0x3FFu;
  float v;
  if (exp == 0) {
    v = static_cast<float>(mant) * 0x1p-24f;
  } else if (exp == 31) {
    std::uint32_t bits = 0x7F800000u | (mant << 13);
    v = std::bit_cast<float>(bits);
  } else {
    std::uint32_t bits = ((exp + 112u) << 23) | (mant << 13);
    v = std::bit_cast<float>(bits);
  }
  return (h & 0x8000u) ? -v : v;
}

// --- quantization --------------------------------------------------------------

// Largest frac_bits in [0, 8] such that every value up to max_value still
// rounds into a u8 code. Throws when even frac_bits = 0 overflows.
inline std::uint8_t auto_frac_bits(float max_value) {
  if (!std::isfinite(max_value) || max_value < 0.0f)
    throw validation_error("fixedU8 requires finite non-negative values");
  for (int f = 8; f >= 0; --f) {
    if (std::lround(static_cast<double>(max_value) * static_cast<double>(1 << f)) <= 255)
      return static_cast<std::uint8_t>(f);
  }
  throw validation_error("value " + std::to_string(max_value) + " too large for fixedU8");
}

// Returns the stored code: raw f32 bits, binary16 bits, or the u8 fixed-point
// code. FixedU8 overflow is a build error naming the value and the frac_bits
// that would accommodate it.
inline std::uint32_t quantize(float v, ValueFormat fmt) {
  if (!std::isfinite(v) || v < 0.0f)
    throw validation_error("cannot quantize non-finite or negative value");
  switch (fmt.kind) {
    case ValueKind::F32: return std::bit_cast<std::uint32_t>(v);
    case ValueKind::F16:
      if (v >= 65520.0f) throw validation_error("value " + std::to_string(v) + " overflows f16");
      return float_to_half(v);
    case ValueKind::FixedU8: {
      if (fmt.frac_bits > 8) throw validation_error("frac_bits out of range");
      long code = std::lround(static_cast<double>(v) * static_cast<double>(1 << fmt.frac_bits));
      if (code > 255)
        throw validation_error("value " + std::to_string(v) + " overflows fixedU8 with frac_bits " +
                               std::to_string(fmt.frac_bits) + "; needs frac_bits " +
                               std::to_string(static_cast<int>(auto_frac_bits(v))));
      return static_cast<std::uint32_t>(code);
    }
  }
  return 0;
}

inline float dequantize(std::uint32_t code, ValueFormat fmt) {
  switch (fmt.kind) {
    case ValueKind::F32: return std::bit_cast<float>(code);
    case ValueKind::F16: return half_to_float(static_cast<std::uint16_t>(code));
    case ValueKind::FixedU8:
      return static_cast<float>(code) * std::ldexp(1.0f, -static_cast<int>(fmt.frac_bits));
  }
  return 0.0f;
}

inline void append_quantized(std::vector<std::uint8_t>& out, float v, ValueFormat fmt) {
  std::uint32_t code = quantize(v, fmt);
  switch (fmt.kind) {
    case ValueKind::F32: put_u32(out, code); break;
    case ValueKind::F16: put_u16(out, static_cast<std::uint16_t>(code)); break;
    case ValueKind::FixedU8: put_u8(out, static_cast<std::uint8_t>(code)); break;
  }
}

// Random-access dequantizing read from a packed values blob.
inline float load_value(const std::uint8_t* base, std::size_t i, ValueFormat fmt) {
  switch (fmt.kind) {
    case ValueKind::F32: {
      float f;
      std::memcpy(&f, base + 4 * i, 4);
      return f;
    }
    case ValueKind::F16: {
      std::uint16_t h;
      std::memcpy(&h, base + 2 * i, 2);
      return half_to_float(h);
    }
    case ValueKind::FixedU8:
      return static_cast<float>(base[i]) * std::ldexp(1.0f, -static_cast<int>(fmt.frac_bits));
  }
  return 0.0f;
}

// Compile-time value readers for the hot kernels.
template <ValueKind K>
struct ValueReader;

template <>
struct ValueReader<ValueKind::F32> {
  explicit ValueReader(unsigned = 0) {}
  static constexpr std::size_t kSize = 4;
  float operator()(const std::uint8_t* base, std::size_t i) const {
    float f;
    std::memcpy(&f, base + 4 * i, 4);
    return f;
  }
};

template <>
struct ValueReader<ValueKind::F16> {
  explicit ValueReader(unsigned = 0) {}
  static constexpr std::size_t kSize = 2;
  float operator()(const std::uint8_t* base, std::size_t i) const {
    std::uint16_t h;
    std::memcpy(&h, base + 2 * i, 2);
    return half_to_float(h);
  }
};

template <>
struct ValueReader<ValueKind::FixedU8> {
  explicit ValueReader(unsigned frac_bits)
      : scale(std::ldexp(1.0f, -static_cast<int>(frac_bits))) {}
  static constexpr std::size_t kSize = 1;
  float scale;
  float operator()(const std::uint8_t* base, std::size_t i) const {
    return static_cast<float>(base[i]) * scale;
  }
};

}  // namespace fidx
